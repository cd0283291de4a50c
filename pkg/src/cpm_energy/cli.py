"""Command-line front end: every study writes CSV to stdout.

Exit codes: 0 ok, 1 usage, 2 configuration, 3 computation.
"""
from __future__ import annotations

import argparse
import csv
import sys

import numpy as np

from . import __version__
from .distance import DEFAULT_MAX_DEPTH, REFERENCE_DMIN_SQ, dmin_search
from .error_models import n_re
from .montecarlo import TrialConfig, compare_to_analytic, simulate_link
from .scenario import CPM_NAMES, ConfigError, load_scenario
from .sweep import SweepSpec, distance_grid, evaluate_point, gamma_grid, optimize_gamma, sweep
from .waveform import CpmScheme, PulseShape, max_phase_slope, phase_trajectory, synthesize_baseband

EXIT_OK, EXIT_USAGE, EXIT_CONFIG, EXIT_COMPUTE = 0, 1, 2, 3


def fmt(v):
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return "%.9g" % v
    return str(v)


def write_csv(out, header, rows):
    w = csv.writer(out, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(v) for v in row])


def _curve_rows(ds):
    labels = list(ds.series)
    header = [ds.x_name] + labels
    rows = [[x] + [ds.series[lab][i] for lab in labels] for i, x in enumerate(ds.x)]
    return header, rows


def cmd_dmin(sc, out):
    rows = []
    for kind in ("LREC", "LRC", "GMSK"):
        for M in (2, 4, 8, 16):
            scheme = CpmScheme(M, sc.h, sc.pulse_len, PulseShape(kind, sc.bt))
            depth = DEFAULT_MAX_DEPTH[M]
            res = dmin_search(scheme, depth)
            ref = REFERENCE_DMIN_SQ.get((kind, M)) if (sc.h, sc.pulse_len, sc.bt) == (0.75, 3, 0.3) else None
            rel = None if ref is None else (res.dmin_sq - ref) / ref
            rows.append([scheme.pulse.short_name, M, res.dmin_sq, ref, rel, res.kmin, depth,
                         " ".join(str(d) for d in res.achieving_sequences[-1].deltas)])
    write_csv(out, ["pulse", "m_ary", "dmin_sq", "reference", "rel_diff", "kmin", "depth", "sequence"], rows)


def cmd_eb_gamma(sc, out):
    ds = sweep(SweepSpec("gamma_db", gamma_grid(sc), sc))
    write_csv(out, *_curve_rows(ds))


def cmd_eb_distance(sc, out):
    ds = sweep(SweepSpec("distance_m", distance_grid(sc), sc))
    write_csv(out, *_curve_rows(ds))


def cmd_eb_order(sc, out):
    ds = sweep(SweepSpec("bits_per_symbol", tuple(sorted(sc.orders)), sc))
    write_csv(out, *_curve_rows(ds))


def cmd_retx(sc, out):
    ds = sweep(SweepSpec("gamma_db", tuple(sorted(sc.retx_gamma_db)), sc, metric="n_re"))
    write_csv(out, *_curve_rows(ds))


def cmd_optimize(sc, out):
    rows = []
    for name in sc.schemes:
        g, e = optimize_gamma(sc, name)
        rows.append([name, g, e])
    write_csv(out, ["scheme", "gamma_star_db", "e_b_star"], rows)


def cmd_simulate(sc, out):
    # first configured scheme supplies m and the per-round energy
    name = sc.schemes[0]
    model = sc.error_model(name)
    packet = sc.packet()
    n_sym = packet.n_symbols(model.m)
    bd = evaluate_point(sc, name, gamma_db=sc.default_gamma_db(name))
    rows = []
    for p in sc.mc_sep:
        cfg = TrialConfig(sep=p, n_sym=n_sym, trials=sc.trials, seed=sc.seed, max_rounds_per_packet=sc.max_rounds)
        stats = simulate_link(cfg, bd.round_energy)
        analytic = float(n_re(p, packet, model.m))
        if stats.stderr > 0:
            cmp = compare_to_analytic(stats, analytic)
            z, ok = cmp["z_score"], cmp["pass"]
        else:
            z, ok = 0.0, stats.mean_transmissions == analytic
        rows.append([p, n_sym, sc.trials, stats.mean_transmissions, stats.stderr, analytic, z, ok,
                     stats.energy_mean, analytic * bd.round_energy, stats.capped])
    write_csv(out, ["sep", "n_sym", "trials", "mean_transmissions", "stderr", "analytic_n_re", "z_score",
                    "pass", "energy_mean_j", "energy_analytic_j", "capped"], rows)


def cmd_envelope_check(sc, out):
    rng = np.random.Generator(np.random.Philox(key=sc.seed))
    rows = []
    for name in sc.schemes:
        if name not in CPM_NAMES:
            continue
        scheme = sc.cpm_scheme(name)
        data = rng.choice(scheme.alphabet, size=sc.envelope_symbols)
        x = synthesize_baseband(scheme, data, sc.samples_per_symbol, 1.0)
        amp = np.sqrt(2 / scheme.symbol_period)
        env_dev = float(np.max(np.abs(np.abs(x) - amp)) / amp)
        phi = phase_trajectory(scheme, data, sc.samples_per_symbol)
        dt = scheme.symbol_period / sc.samples_per_symbol
        step = float(np.max(np.abs(np.diff(phi))))
        bound = max_phase_slope(scheme) * dt * 1.01
        rows.append([name, scheme.m_ary, env_dev, step, bound, env_dev <= 1e-9 and step <= bound])
    write_csv(out, ["scheme", "m_ary", "max_rel_envelope_dev", "max_phase_step", "phase_step_bound", "pass"], rows)


COMMANDS = {
    "dmin": (cmd_dmin, "minimum-distance table for h, N, BT from the scenario"),
    "eb-gamma": (cmd_eb_gamma, "energy per bit vs received SNR"),
    "eb-distance": (cmd_eb_distance, "energy per bit vs distance"),
    "eb-order": (cmd_eb_order, "energy per bit vs bits per symbol (CPM only)"),
    "retx": (cmd_retx, "mean transmissions per packet vs SNR"),
    "optimize": (cmd_optimize, "energy-optimal SNR per scheme"),
    "simulate": (cmd_simulate, "Monte-Carlo ARQ check against the analytic model"),
    "envelope-check": (cmd_envelope_check, "constant envelope and phase continuity of CPM waveforms"),
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser():
    ap = _Parser(prog="cpm-energy", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name, (_, help_text) in COMMANDS.items():
        p = sub.add_parser(name, help=help_text)
        p.add_argument("-c", "--config", help="key=value scenario file")
        p.add_argument("-s", "--set", dest="overrides", action="append", default=[], metavar="KEY=VALUE",
                       help="override a scenario key (repeatable)")
        p.add_argument("--seed", type=int, help="shorthand for --set seed=N")
    p = sub.add_parser("show-config", help="print the effective scenario as key=value")
    p.add_argument("-c", "--config")
    p.add_argument("-s", "--set", dest="overrides", action="append", default=[], metavar="KEY=VALUE")
    p.add_argument("--seed", type=int)
    return ap


def main(argv=None, out=None, err=None) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    overrides = list(args.overrides)
    if args.seed is not None:
        overrides.append(f"seed={args.seed}")
    try:
        sc = load_scenario(args.config, overrides)
    except ConfigError as exc:
        print(f"config error: {exc}", file=err)
        return EXIT_CONFIG
    if args.command == "show-config":
        out.write(sc.to_text())
        return EXIT_OK
    func = COMMANDS[args.command][0]
    try:
        func(sc, out)
    except (ValueError, ArithmeticError, RuntimeError) as exc:
        print(f"{args.command}: {exc}", file=err)
        return EXIT_COMPUTE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
