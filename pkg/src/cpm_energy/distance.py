"""Minimum normalised squared Euclidean distance of CPM schemes.

The search enumerates phase *difference* sequences depth-first and keeps
an upper bound on d^2_min; any prefix whose accumulated distance already
exceeds the bound (plus a margin) is abandoned. Only merged events count:
the difference phase must be back at 0 mod 2*pi with every pulse saturated.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from math import log2

import numpy as np

from .waveform import CpmScheme, PulseShape, is_rational_index, phase_pulse_value

# d^2_min for h = 0.75, N = 3 (GMSK at BT = 0.3), keyed by (pulse kind, M).
REFERENCE_DMIN_SQ = {
    ("LREC", 2): 2.31648,
    ("LREC", 4): 1.41550,
    ("LREC", 8): 2.12325,
    ("LREC", 16): 2.831,
    ("LRC", 2): 2.96059,
    ("LRC", 4): 5.30037,
    ("LRC", 8): 6.12447,
    ("LRC", 16): 8.16596,
    ("GMSK", 2): 2.89955,
    ("GMSK", 4): 4.69275,
    ("GMSK", 8): 5.95011,
    ("GMSK", 16): 7.93348,
}
REFERENCE_MOD_INDEX = 0.75
REFERENCE_PULSE_LEN = 3
REFERENCE_BT = 0.3

DEFAULT_MAX_DEPTH = {2: 12, 4: 12, 8: 8, 16: 6}

TIE_RTOL = 1e-6
_QUAD_NODES = 64


class NoMergedEventError(RuntimeError):
    """No difference sequence merged within the allowed depth."""


@dataclass(frozen=True)
class DifferenceSequence:
    deltas: tuple

    def __post_init__(self):
        deltas = tuple(int(d) for d in self.deltas)
        if not deltas or deltas[0] == 0:
            raise ValueError("difference sequence must be nonempty with a nonzero first element")
        if any(d % 2 for d in deltas):
            raise ValueError("difference symbols must be even")
        object.__setattr__(self, "deltas", deltas)

    def check_alphabet(self, m_ary: int):
        if any(abs(d) > 2 * (m_ary - 1) for d in self.deltas):
            raise ValueError(f"difference symbol exceeds 2(M-1) = {2 * (m_ary - 1)}")

    def __len__(self):
        return len(self.deltas)

    def __neg__(self):
        return DifferenceSequence(tuple(-d for d in self.deltas))


@dataclass
class DistanceResult:
    dmin_sq: float
    kmin: int
    search_depth: int
    achieving_sequences: list = field(default_factory=list)
    nodes_visited: int = 0


def _as_deltas(diff) -> DifferenceSequence:
    return diff if isinstance(diff, DifferenceSequence) else DifferenceSequence(tuple(diff))


def phase_difference_integral(scheme: CpmScheme, diff, horizon: int, points_per_symbol: int = 256) -> float:
    """Normalised squared distance (log2 M / T) * integral of 1 - cos(delta phi) over [0, horizon T].

    Evaluated directly on the time axis with composite Simpson per symbol;
    it does not share code with the trellis tables used by `dmin_search`.
    """
    diff = _as_deltas(diff)
    diff.check_alphabet(scheme.m_ary)
    if horizon < len(diff):
        raise ValueError(f"horizon {horizon} shorter than the difference sequence ({len(diff)})")
    if points_per_symbol < 64:
        raise ValueError("need at least 64 quadrature points per symbol")
    n = points_per_symbol + (points_per_symbol % 2)  # Simpson wants an even count
    T = scheme.symbol_period
    total = 0.0
    tau = np.linspace(0.0, T, n + 1)
    w = np.ones(n + 1)
    w[1:-1:2] = 4
    w[2:-1:2] = 2
    w *= (T / n) / 3
    for k in range(horizon):
        t = k * T + tau
        dphi = np.zeros_like(t)
        for i, d in enumerate(diff.deltas):
            if d:
                dphi += d * phase_pulse_value(scheme, t - i * T)
        dphi *= 2 * np.pi * scheme.mod_index
        total += float(np.dot(w, 1.0 - np.cos(dphi)))
    return log2(scheme.m_ary) / T * total


class _SegmentTables:
    """Per-symbol cos/sin integrals of the in-flight phase for every window of N deltas."""

    def __init__(self, scheme: CpmScheme):
        self.scheme = scheme
        M, N = scheme.m_ary, scheme.pulse_len
        T = scheme.symbol_period
        self.values = list(range(-2 * (M - 1), 2 * (M - 1) + 1, 2))
        self.nv = len(self.values)
        self.zero = self.values.index(0)
        x, wts = np.polynomial.legendre.leggauss(_QUAD_NODES)
        tau = 0.5 * T * (x + 1)
        wts = 0.5 * wts  # integrates over [0, T] divided by T
        # qmat[j] = q(tau + jT): pulse of the delta that entered j symbols ago
        qmat = np.stack([phase_pulse_value(scheme, tau + j * T) for j in range(N)])
        vals = np.array(self.values, dtype=float)
        # window index = sum(idx_j * nv**j), j = 0 newest
        grids = np.array(list(product(range(self.nv), repeat=N)))[:, ::-1]
        deltas = vals[grids]
        psi = 2 * np.pi * scheme.mod_index * deltas @ qmat
        self.cos_int = np.cos(psi) @ wts
        self.sin_int = np.sin(psi) @ wts
        self.scale = log2(M)

        rat = is_rational_index(scheme.mod_index)
        if rat is not None:
            p, q = rat
            self.modulus = q
            ks = np.arange(q)
            theta = 2 * np.pi * p * ks / q
        else:
            self.modulus = None
            theta = None
        self._theta = theta
        self._h = scheme.mod_index
        self._pow = [self.nv ** j for j in range(N)]

    def theta(self, s):
        if self.modulus is not None:
            return self._theta[s]
        return 2 * np.pi * self._h * s

    def reduce(self, s):
        return s % self.modulus if self.modulus is not None else s

    def merged(self, s) -> bool:
        if self.modulus is not None:
            return s == 0
        r = (self._h * s) % 1.0
        return min(r, 1.0 - r) < 1e-9 / (2 * np.pi)

    def segment(self, window: int, s) -> float:
        th = self.theta(s)
        return self.scale * (1.0 - np.cos(th) * self.cos_int[window] + np.sin(th) * self.sin_int[window])


def dmin_search(scheme: CpmScheme, max_depth: int | None = None, prune_margin: float = 0.0) -> DistanceResult:
    """Branch-and-bound search for d^2_min and its multiplicity.

    ``max_depth`` is the observation length in symbol intervals: a
    sequence of K differences counts only if it merges by K + N - 1 <= max_depth.
    Sequences and their negatives are both reported (sign symmetry).
    """
    N = scheme.pulse_len
    if max_depth is None:
        max_depth = DEFAULT_MAX_DEPTH.get(scheme.m_ary, 6)
    if max_depth < N + 1:
        raise ValueError(f"max_depth must be >= N + 1 = {N + 1}")
    if prune_margin < 0:
        raise ValueError("prune_margin must be >= 0")

    tab = _SegmentTables(scheme)
    nv, zero, values = tab.nv, tab.zero, tab.values
    top = tab._pow[-1]
    half = [v // 2 for v in values]
    max_len = max_depth - (N - 1)

    best = np.inf
    hits: list = []
    visited = 0

    def tail_cost(window, s):
        # N - 1 zero symbols flush the in-flight pulses
        cost = 0.0
        for _ in range(N - 1):
            oldest = window // top
            s = tab.reduce(s + half[oldest])
            window = (window % top) * nv + zero
            cost += tab.segment(window, s)
        return cost

    def bound():
        return best * (1 + TIE_RTOL) + prune_margin

    def dfs(path, window, s, partial, total_sum):
        nonlocal best, visited
        for idx in range(nv):
            visited += 1
            oldest = window // top
            s_new = tab.reduce(s + half[oldest])
            w_new = (window % top) * nv + idx
            d = partial + tab.segment(w_new, s_new)
            if d > bound():
                continue
            path.append(idx)
            tot = total_sum + half[idx]
            if idx != zero and tab.merged(tab.reduce(tot)):
                cand = d + tail_cost(w_new, s_new)
                if cand < best * (1 - TIE_RTOL):
                    best = cand
                    hits[:] = [(cand, tuple(path))]
                elif cand <= best * (1 + TIE_RTOL):
                    hits.append((cand, tuple(path)))
                    if cand < best:
                        best = cand
            if len(path) < max_len:
                dfs(path, w_new, s_new, d, tot)
            path.pop()

    # only positive leading differences; negatives are mirror images
    for idx0 in range(zero + 1, nv):
        visited += 1
        w0 = idx0 + sum(zero * p for p in tab._pow[1:])
        s0 = tab.reduce(0)
        d0 = tab.segment(w0, s0)
        if d0 > bound():
            continue
        path = [idx0]
        tot = half[idx0]
        if tab.merged(tab.reduce(tot)):
            cand = d0 + tail_cost(w0, s0)
            if cand < best * (1 - TIE_RTOL):
                best = cand
                hits[:] = [(cand, tuple(path))]
            elif cand <= best * (1 + TIE_RTOL):
                hits.append((cand, tuple(path)))
                best = min(best, cand)
        if max_len > 1:
            dfs(path, w0, s0, d0, tot)

    if not np.isfinite(best):
        raise NoMergedEventError(
            f"no merged event found within depth {max_depth} for {scheme}"
        )
    keep = [p for c, p in hits if c <= best * (1 + TIE_RTOL)]
    seqs = []
    for p in keep:
        pos = DifferenceSequence(tuple(values[i] for i in p))
        seqs.extend([pos, -pos])
    seqs.sort(key=lambda q: q.deltas)
    return DistanceResult(
        dmin_sq=float(best),
        kmin=len(seqs),
        search_depth=max_depth,
        achieving_sequences=seqs,
        nodes_visited=visited,
    )


def table_lookup(pulse, m_ary: int) -> float:
    """Reference d^2_min for h = 0.75, N = 3 (GMSK BT = 0.3)."""
    kind = pulse.kind if isinstance(pulse, PulseShape) else PulseShape(pulse).kind
    try:
        return REFERENCE_DMIN_SQ[(kind, int(m_ary))]
    except KeyError:
        raise KeyError(f"no reference entry for pulse {kind} with M={m_ary}") from None


def matches_reference(scheme: CpmScheme) -> bool:
    return (
        (scheme.pulse.kind, scheme.m_ary) in REFERENCE_DMIN_SQ
        and abs(scheme.mod_index - REFERENCE_MOD_INDEX) < 1e-12
        and scheme.pulse_len == REFERENCE_PULSE_LEN
        and (scheme.pulse.kind != "GMSK" or abs(scheme.pulse.bt_product - REFERENCE_BT) < 1e-12)
    )


def resolve_dmin_sq(scheme: CpmScheme, max_depth: int | None = None) -> float:
    """Reference value where one exists, otherwise a fresh search."""
    if matches_reference(scheme):
        return table_lookup(scheme.pulse, scheme.m_ary)
    return dmin_search(scheme, max_depth).dmin_sq
