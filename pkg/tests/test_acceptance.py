"""End-to-end acceptance checks, one per criterion.

Each check prints a single PASS/FAIL line with its measured numbers and
then asserts. Run directly (``python3 tests/test_acceptance.py``) for the
summary alone.
"""
import io
import math
import sys
import time

import numpy as np
import pytest
from scipy.integrate import quad

from cpm_energy.cli import main as cli_main
from cpm_energy.distance import DEFAULT_MAX_DEPTH, REFERENCE_DMIN_SQ, dmin_search
from cpm_energy.energy import LinkBudget, eb_per_bit, received_snr, transmit_power
from cpm_energy.error_models import n_re, q_function
from cpm_energy.montecarlo import TrialConfig, compare_to_analytic, simulate_link
from cpm_energy.scenario import CPM_NAMES, SCHEME_NAMES, Scenario
from cpm_energy.sweep import (
    SweepSpec,
    distance_grid,
    evaluate_point,
    gamma_grid,
    optimize_gamma,
    sweep,
    unimodality_check,
)
from cpm_energy.waveform import CpmScheme, PulseShape, freq_pulse_value, max_phase_slope, phase_trajectory, \
    synthesize_baseband

pytestmark = pytest.mark.acceptance

SC = Scenario()
DMIN_TOL = {2: 0.01, 4: 0.02, 8: 0.05, 16: 0.05}


def _spread(values):
    v = np.asarray(values, dtype=float)
    return float((v.max() - v.min()) / v.min())


def check_table_reproduction():
    t0 = time.perf_counter()
    misses = []
    for (kind, M), ref in sorted(REFERENCE_DMIN_SQ.items()):
        scheme = CpmScheme(M, 0.75, 3, PulseShape(kind, 0.3))
        got = dmin_search(scheme, DEFAULT_MAX_DEPTH[M]).dmin_sq
        rel = (got - ref) / ref
        if abs(rel) > DMIN_TOL[M]:
            misses.append(f"{kind}/{M}: {got:.5f} vs {ref} ({rel:+.2%})")
    elapsed = time.perf_counter() - t0
    ok = not misses and elapsed < 300
    return ok, f"{12 - len(misses)}/12 within tolerance, {elapsed:.1f}s; misses: {'; '.join(misses) or 'none'}"


def check_msk():
    d2 = dmin_search(CpmScheme(2, 0.5, 1, PulseShape("LREC"))).dmin_sq
    return abs(d2 - 2.0) <= 1e-3, f"d2min = {d2:.6f}"


def check_snr_curve_shape():
    ds = sweep(SweepSpec("gamma_db", gamma_grid(SC), SC.with_overrides(distance_m=10.0)))
    uni = unimodality_check(ds)
    optima = {name: optimize_gamma(SC, name, (0.0, 25.0), SC.opt_tol_db, d=10.0) for name in SCHEME_NAMES}
    problems = [f"{n} not unimodal" for n, u in uni.items() if not u]
    for name, (g, _) in optima.items():
        centre = 8.0 if name in CPM_NAMES else 15.0
        if abs(g - centre) > 2.0:
            problems.append(f"{name} optimum {g:.2f} dB outside {centre:g}+-2")
    m16 = [optima[n][1] for n in ("REC", "RC", "GMSK", "QAM16")]
    if _spread(m16) > 0.10:
        problems.append(f"M=16 minima spread {_spread(m16):.1%}")
    summary = ", ".join(f"{n} {g:.2f} dB" for n, (g, _) in optima.items())
    return not problems, f"optima: {summary}; {'; '.join(problems) or 'all shape checks hold'}"


def check_distance_curve_shape():
    grid = distance_grid(SC.with_overrides(d_min_m=1.0, d_max_m=100.0, d_points=100, d_log=False))
    ds = sweep(SweepSpec("distance_m", grid, SC))
    problems = [n for n in ds.series if not np.all(np.diff(ds.column(n)) >= 0)]
    cpm = np.vstack([ds.column(n) for n in CPM_NAMES])
    worst = float(np.max((cpm.max(axis=0) - cpm.min(axis=0)) / cpm.min(axis=0)))
    at100 = {n: ds.column(n)[-1] for n in ds.series}
    below = max(at100[n] for n in CPM_NAMES) < min(at100["OQPSK"], at100["QAM16"])
    ok = not problems and worst <= 0.01 and below
    return ok, (f"nondecreasing violations: {problems or 'none'}; CPM pointwise spread {worst:.3%}; "
                f"at 100 m CPM max {max(at100[n] for n in CPM_NAMES):.4g} vs OQPSK {at100['OQPSK']:.4g}, "
                f"QAM16 {at100['QAM16']:.4g}")


def check_order_curve_shape():
    sc = SC.with_overrides(gamma_cpm_db=8.0, distance_m=10.0)
    ds = sweep(SweepSpec("bits_per_symbol", (1, 2, 3, 4), sc, schemes=CPM_NAMES))
    decreasing = {n: bool(np.all(np.diff(ds.column(n)) < 0)) for n in CPM_NAMES}
    spread = _spread([ds.column(n)[-1] for n in CPM_NAMES])
    return all(decreasing.values()) and spread <= 0.01, f"strictly decreasing: {decreasing}; m=4 spread {spread:.3%}"


def check_retransmission_ordering():
    ds = sweep(SweepSpec("gamma_db", (6.0, 8.0, 10.0), SC, metric="n_re"))
    problems = []
    for i, g in enumerate(ds.x):
        col = {n: ds.series[n][i] for n in ds.series}
        if max(col, key=col.get) != "QAM16":
            problems.append(f"QAM16 not largest at {g:g} dB")
    at10 = {n: ds.series[n][2] for n in ds.series if n != "QAM16"}
    problems += [f"{n} n_re={v:.4f} at 10 dB" for n, v in at10.items() if v > 1.001]
    oq, rc = ds.series["OQPSK"], ds.series["RC"]
    crossover = ", ".join(f"{g:g} dB: OQPSK {a:.4f} RC {b:.4f}" for g, a, b in zip(ds.x, oq, rc))
    return not problems, f"{'; '.join(problems) or 'ordering holds'}; recorded {crossover}"


def check_monte_carlo():
    t0 = time.perf_counter()
    packet = SC.packet()
    bd = evaluate_point(SC, "REC", gamma_db=8.0, d=10.0)
    parts, ok = [], True
    for p in (1e-3, 1e-2, 5e-2):
        stats = simulate_link(TrialConfig(p, packet.n_symbols(4), 100_000, SC.seed), bd.round_energy)
        analytic = float(n_re(p, packet, 4))
        z = compare_to_analytic(stats, analytic)
        ze = abs(stats.energy_mean - analytic * bd.round_energy) / stats.energy_stderr
        ok &= z["pass"] and ze <= 3
        parts.append(f"sep={p:g} z={z['z_score']:.2f} z_E={ze:.2f}")
    elapsed = time.perf_counter() - t0
    ok &= elapsed < 60
    return bool(ok), f"{', '.join(parts)}; {elapsed:.1f}s"


def _eb_by_hand():
    n0 = 10 ** (-174 / 10) * 1e-3
    a = 10 ** 3 * n0 * 20e3 * 10 * 10
    gamma = 10 ** 0.8
    p_tx = 15.9e-3 + a * 10 ** 3.5 * gamma / 0.7
    t_fw, t_fb = (296 / 4) / 20e3, (56 / 4) / 20e3
    e_round = (p_tx + 58.2e-3) * (t_fw + t_fb)
    s = 0.5 * math.erfc(math.sqrt(2.831 * gamma / 2))
    return e_round / (1 - s) ** 74 / 296


def check_spot_value():
    sc = SC
    got = eb_per_bit(sc.profile("REC"), sc.link_budget(), sc.error_model("REC"), sc.packet(), 56, 10.0,
                     10 ** 0.8, 20e3).e_b
    ref = _eb_by_hand()
    rel = abs(got - ref) / ref
    return rel <= 0.01, f"e_b = {got:.6e} J/bit, hand evaluation {ref:.6e} ({rel:.1e} rel)"


def check_property_suites():
    rng = np.random.default_rng(0)
    problems = []
    env = cont = area = 0.0
    for _ in range(40):
        kind = rng.choice(["LREC", "LRC", "GMSK"])
        M = int(rng.choice([2, 4, 8, 16]))
        s = CpmScheme(M, float(rng.uniform(0.1, 1.5)), int(rng.integers(1, 5)), PulseShape(kind, 0.3))
        data = rng.choice(s.alphabet, size=int(rng.integers(1, 20)))
        x = synthesize_baseband(s, data, 16, 1.0)
        env = max(env, float(np.max(np.abs(np.abs(x) - math.sqrt(2)))) / math.sqrt(2))
        phi = phase_trajectory(s, data, 16)
        cont = max(cont, float(np.max(np.abs(np.diff(phi)))) / (max_phase_slope(s) / 16 * 1.01))
        area = max(area, abs(quad(lambda t: float(freq_pulse_value(s, t)), 0, s.duration,
                                  epsabs=1e-13, limit=200)[0] - 0.5))
    if env > 1e-9:
        problems.append("envelope")
    if cont > 1:
        problems.append("phase continuity")
    if area > 1e-6:
        problems.append("pulse area")
    x = np.linspace(0, 8, 81)
    q_ref = np.array([quad(lambda u: math.exp(-u * u / 2) / math.sqrt(2 * math.pi), v, np.inf,
                           epsabs=1e-15, epsrel=1e-13)[0] for v in x])
    q_err = float(np.max(np.abs(q_function(x) - q_ref)))
    if q_err > 1e-10:
        problems.append("Q-function")
    link = LinkBudget.from_db()
    d, g = rng.uniform(0.1, 1e4, 200), rng.uniform(0, 1e6, 200)
    rt = float(np.max(np.abs(received_snr(link, d, transmit_power(link, d, g)) / g - 1)))
    if rt > 1e-12:
        problems.append("power/SNR round trip")
    gs_err = 0.0
    for name in SCHEME_NAMES:
        g_star, _ = optimize_gamma(SC, name, (0.0, 25.0), 0.05)
        grid = np.arange(0.0, 25.0 + 1e-9, 0.005)
        vals = [evaluate_point(SC, name, gamma_db=v).e_b for v in grid]
        gs_err = max(gs_err, abs(g_star - grid[int(np.argmin(vals))]))
    if gs_err > 0.05:
        problems.append("golden section")
    return not problems, (f"envelope {env:.1e}, continuity ratio {cont:.3f}, area {area:.1e}, Q {q_err:.1e}, "
                          f"round trip {rt:.1e}, golden vs grid {gs_err:.3f} dB; "
                          f"{'failing: ' + ', '.join(problems) if problems else 'all hold'}")


def check_determinism():
    differing = []
    for cmd in ("dmin", "eb-gamma", "eb-distance", "eb-order", "retx", "optimize", "simulate",
                "envelope-check", "show-config"):
        outs = []
        for _ in range(2):
            buf = io.StringIO()
            code = cli_main([cmd], buf, io.StringIO())
            outs.append((code, buf.getvalue()))
        if outs[0] != outs[1] or outs[0][0] != 0:
            differing.append(cmd)
    return not differing, f"non-identical or failing: {differing or 'none'}"


CRITERIA = [
    (1, "minimum-distance table reproduction", check_table_reproduction),
    (2, "MSK distance sanity", check_msk),
    (3, "energy vs SNR shape and optima", check_snr_curve_shape),
    (4, "energy vs distance shape", check_distance_curve_shape),
    (5, "energy vs modulation order shape", check_order_curve_shape),
    (6, "retransmission ordering", check_retransmission_ordering),
    (7, "Monte-Carlo oracle equivalence", check_monte_carlo),
    (8, "energy-per-bit spot value", check_spot_value),
    (9, "property suites", check_property_suites),
    (10, "byte determinism", check_determinism),
]


def _line(num, title, ok, detail):
    return f"criterion {num:>2} {'PASS' if ok else 'FAIL'} {title}: {detail}"


@pytest.mark.parametrize("num,title,check", CRITERIA, ids=[f"criterion_{c[0]}" for c in CRITERIA])
def test_criterion(num, title, check, capsys):
    ok, detail = check()
    with capsys.disabled():
        print("\n" + _line(num, title, ok, detail))
    assert ok, detail


if __name__ == "__main__":
    failed = 0
    for num, title, check in CRITERIA:
        ok, detail = check()
        failed += not ok
        print(_line(num, title, ok, detail), flush=True)
    sys.exit(1 if failed else 0)
