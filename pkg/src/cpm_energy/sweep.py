"""Parameter studies over SNR, distance and modulation order, plus the SNR optimiser."""
from __future__ import annotations

from dataclasses import dataclass, field
from math import sqrt

import numpy as np

from .energy import db_to_linear, eb_per_bit
from .error_models import n_re, sep
from .scenario import CPM_NAMES, Scenario

VARIABLES = ("gamma_db", "distance_m", "bits_per_symbol")
METRICS = ("e_b", "n_re")

_INV_PHI = (sqrt(5.0) - 1) / 2


@dataclass(frozen=True)
class SweepSpec:
    variable: str
    grid: tuple
    scenario: Scenario = field(default_factory=Scenario)
    schemes: tuple | None = None
    metric: str = "e_b"

    def __post_init__(self):
        if self.variable not in VARIABLES:
            raise ValueError(f"variable must be one of {VARIABLES}")
        if self.metric not in METRICS:
            raise ValueError(f"metric must be one of {METRICS}")
        grid = tuple(float(x) for x in self.grid)
        if not grid:
            raise ValueError("grid must be nonempty")
        if any(b <= a for a, b in zip(grid, grid[1:])):
            raise ValueError("grid must be strictly increasing")
        object.__setattr__(self, "grid", grid)
        names = tuple(s.upper() for s in (self.schemes or self.scenario.schemes))
        if self.variable == "bits_per_symbol":
            names = tuple(n for n in names if n in CPM_NAMES)
            if not names:
                raise ValueError("a modulation-order sweep needs at least one CPM scheme")
            if any(x not in (1, 2, 3, 4) for x in grid):
                raise ValueError("bits_per_symbol grid values must be in {1, 2, 3, 4}")
        object.__setattr__(self, "schemes", names)


@dataclass
class CurveDataset:
    x_name: str
    x: list
    series: dict
    y_name: str = "e_b_j_per_bit"
    metadata: dict = field(default_factory=dict)
    errors: dict = field(default_factory=dict)

    def column(self, label):
        return np.array([np.nan if v is None else v for v in self.series[label]], dtype=float)


def evaluate_point(scenario: Scenario, name: str, *, gamma_db=None, d=None, m=None):
    """EnergyBreakdown for one scheme at one operating point."""
    gamma_db = scenario.default_gamma_db(name) if gamma_db is None else gamma_db
    d = scenario.distance_m if d is None else d
    model = scenario.error_model(name, None if m is None else 2 ** int(m))
    return eb_per_bit(
        scenario.profile(name),
        scenario.link_budget(),
        model,
        scenario.packet(),
        scenario.feedback_bits or None,
        d,
        float(db_to_linear(gamma_db)),
        scenario.symbol_rate,
    )


def _point(spec: SweepSpec, name, x):
    sc = spec.scenario
    if spec.metric == "n_re" and spec.variable == "gamma_db":
        model = sc.error_model(name)
        return float(n_re(sep(model, float(db_to_linear(x))), sc.packet(), model.m))
    kw = {"gamma_db": x} if spec.variable == "gamma_db" else (
        {"d": x} if spec.variable == "distance_m" else {"m": x})
    bd = evaluate_point(sc, name, **kw)
    return bd.n_re if spec.metric == "n_re" else bd.e_b


def sweep(spec: SweepSpec) -> CurveDataset:
    """Evaluate every scheme at every grid point; failed points become None."""
    series, errors = {}, {}
    for name in spec.schemes:
        ys = []
        for x in spec.grid:
            try:
                ys.append(_point(spec, name, x))
            except (ValueError, ArithmeticError) as exc:
                ys.append(None)
                errors.setdefault(name, []).append((x, str(exc)))
        series[name] = ys
    return CurveDataset(
        x_name=spec.variable,
        x=list(spec.grid),
        series=series,
        y_name="n_re" if spec.metric == "n_re" else "e_b_j_per_bit",
        metadata={"scenario": spec.scenario.to_text()},
        errors=errors,
    )


def gamma_grid(scenario: Scenario) -> tuple:
    n = int(round((scenario.gamma_max_db - scenario.gamma_min_db) / scenario.gamma_step_db))
    return tuple(round(scenario.gamma_min_db + i * scenario.gamma_step_db, 12) for i in range(n + 1))


def distance_grid(scenario: Scenario) -> tuple:
    if scenario.d_points == 1:
        return (scenario.d_min_m,)
    if scenario.d_log:
        g = np.geomspace(scenario.d_min_m, scenario.d_max_m, scenario.d_points)
    else:
        g = np.linspace(scenario.d_min_m, scenario.d_max_m, scenario.d_points)
    return tuple(float(v) for v in g)


def golden_section_min(f, lo, hi, tol=0.05, max_iter=200):
    """Minimise a unimodal `f` on [lo, hi]; returns (x, f(x)).

    The interior estimate is compared against both endpoints so a
    monotone function yields its better endpoint.
    """
    if not lo < hi:
        raise ValueError("need lo < hi")
    if not tol > 0:
        raise ValueError("tol must be > 0")
    a, b = float(lo), float(hi)
    x1 = b - _INV_PHI * (b - a)
    x2 = a + _INV_PHI * (b - a)
    f1, f2 = f(x1), f(x2)
    it = 0
    while b - a > tol and it < max_iter:
        if f1 <= f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - _INV_PHI * (b - a)
            f1 = f(x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + _INV_PHI * (b - a)
            f2 = f(x2)
        it += 1
    x_mid = 0.5 * (a + b)
    cands = [(f(x_mid), x_mid), (f(lo), float(lo)), (f(hi), float(hi))]
    fbest, xbest = min(cands, key=lambda c: c[0])
    return xbest, fbest


def optimize_gamma(scenario: Scenario, name: str, bracket_db=None, tol_db=None, d=None):
    """SNR (dB) minimising energy per bit for one scheme; returns (gamma_star_db, e_b_star)."""
    lo, hi = bracket_db if bracket_db is not None else (scenario.opt_lo_db, scenario.opt_hi_db)
    if not lo < hi:
        raise ValueError(f"invalid bracket [{lo}, {hi}]")
    tol = scenario.opt_tol_db if tol_db is None else tol_db

    def f(g):
        return evaluate_point(scenario, name, gamma_db=g, d=d).e_b

    return golden_section_min(f, lo, hi, tol)


def is_unimodal(values, plateau_rtol=1e-9) -> bool:
    """At most one descending-to-ascending turn and no ascending-to-descending one."""
    y = [v for v in values if v is not None and np.isfinite(v)]
    if not y:
        raise ValueError("series is empty")
    signs = []
    for a, b in zip(y, y[1:]):
        if abs(b - a) <= plateau_rtol * max(abs(a), abs(b)):
            continue
        signs.append(1 if b > a else -1)
    rising = False
    for s in signs:
        if s > 0:
            rising = True
        elif rising:
            return False
    return True


def unimodality_check(data) -> dict:
    """Per-series unimodality flags for a CurveDataset (or a plain mapping of series)."""
    series = data.series if isinstance(data, CurveDataset) else data
    return {label: is_unimodal(ys) for label, ys in series.items()}
