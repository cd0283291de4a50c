"""CPM scheme definitions, frequency/phase pulses and baseband synthesis.

Everything here is complex-baseband; the carrier only shows up in the
docs. Initial phase is fixed at zero.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from math import isclose, log2, sqrt

import numpy as np
from scipy.special import ndtr

PULSE_KINDS = ("LREC", "LRC", "GMSK")

_SQRT_LN2 = sqrt(np.log(2.0))


def _q(x):
    return ndtr(-np.asarray(x, dtype=float))


def _q_antiderivative(u):
    # d/du [u Q(u) - phi(u)] = Q(u)
    u = np.asarray(u, dtype=float)
    return u * _q(u) - np.exp(-0.5 * u * u) / sqrt(2.0 * np.pi)


@dataclass(frozen=True)
class PulseShape:
    kind: str = "LREC"
    bt_product: float = 0.3

    def __post_init__(self):
        kind = self.kind.upper()
        # accept the short table names too
        kind = {"REC": "LREC", "RC": "LRC"}.get(kind, kind)
        if kind not in PULSE_KINDS:
            raise ValueError(f"unknown pulse kind {self.kind!r}; expected one of {PULSE_KINDS}")
        object.__setattr__(self, "kind", kind)
        if kind == "GMSK" and not self.bt_product > 0:
            raise ValueError("GMSK pulse needs bt_product > 0")

    @property
    def short_name(self) -> str:
        return {"LREC": "REC", "LRC": "RC", "GMSK": "GMSK"}[self.kind]


@dataclass(frozen=True)
class CpmScheme:
    """Single-h CPM waveform.

    Parameters
    ----------
    m_ary : int
        Alphabet size M (power of two).
    mod_index : float
        Modulation index h.
    pulse_len : int
        Frequency pulse length N in symbol intervals.
    pulse : PulseShape
    symbol_period : float
        T in seconds.
    """

    m_ary: int = 2
    mod_index: float = 0.75
    pulse_len: int = 3
    pulse: PulseShape = field(default_factory=PulseShape)
    symbol_period: float = 1.0

    def __post_init__(self):
        m = int(self.m_ary)
        if m != self.m_ary or m < 2 or (m & (m - 1)):
            raise ValueError(f"m_ary must be a power of two >= 2, got {self.m_ary}")
        if not self.mod_index > 0:
            raise ValueError("mod_index must be > 0")
        if int(self.pulse_len) != self.pulse_len or self.pulse_len < 1:
            raise ValueError("pulse_len must be an integer >= 1")
        if not self.symbol_period > 0:
            raise ValueError("symbol_period must be > 0")
        if isinstance(self.pulse, str):
            object.__setattr__(self, "pulse", PulseShape(self.pulse))

    @property
    def bits_per_symbol(self) -> int:
        return int(round(log2(self.m_ary)))

    @property
    def is_full_response(self) -> bool:
        return self.pulse_len == 1

    @property
    def alphabet(self) -> np.ndarray:
        return np.arange(-(self.m_ary - 1), self.m_ary, 2)

    @property
    def duration(self) -> float:
        """Pulse support length N*T."""
        return self.pulse_len * self.symbol_period


def validate_symbols(scheme: CpmScheme, data) -> np.ndarray:
    """Return `data` as an int array after checking it against the M-ary alphabet."""
    arr = np.atleast_1d(np.asarray(data))
    if arr.ndim != 1 or arr.size == 0:
        raise ValueError("symbol sequence must be a nonempty 1-d sequence")
    if not np.all(np.equal(np.mod(arr, 1), 0)):
        raise ValueError("symbols must be integers")
    arr = arr.astype(np.int64)
    bad = (np.mod(arr, 2) == 0) | (np.abs(arr) > scheme.m_ary - 1)
    if np.any(bad):
        raise ValueError(
            f"symbols {sorted(set(arr[bad].tolist()))} not in the {scheme.m_ary}-ary alphabet"
        )
    return arr


def _gmsk_raw(scheme: CpmScheme, t):
    T = scheme.symbol_period
    k = 2 * np.pi * scheme.pulse.bt_product / T / _SQRT_LN2
    tc = t - scheme.duration / 2
    return (_q(k * (tc - T / 2)) - _q(k * (tc + T / 2))) / (2 * T)


def _gmsk_raw_cumulative(scheme: CpmScheme, t):
    # closed-form integral of _gmsk_raw from 0 to t
    T = scheme.symbol_period
    k = 2 * np.pi * scheme.pulse.bt_product / T / _SQRT_LN2

    def prim(x):
        xc = x - scheme.duration / 2
        return (_q_antiderivative(k * (xc - T / 2)) - _q_antiderivative(k * (xc + T / 2))) / (2 * T * k)

    return prim(t) - prim(0.0)


def _gmsk_scale(scheme: CpmScheme) -> float:
    # truncation to [0, NT] loses a little area; restore q(NT) = 1/2
    return 0.5 / float(_gmsk_raw_cumulative(scheme, scheme.duration))


def freq_pulse_value(scheme: CpmScheme, t):
    """Frequency pulse g(t), zero outside [0, N*T]. Vectorised over `t`."""
    t = np.asarray(t, dtype=float)
    NT = scheme.duration
    inside = (t >= 0) & (t <= NT)
    kind = scheme.pulse.kind
    if kind == "LREC":
        g = np.full_like(t, 1.0 / (2 * NT))
    elif kind == "LRC":
        g = (1 - np.cos(2 * np.pi * t / NT)) / (2 * NT)
    else:
        g = _gmsk_raw(scheme, t) * _gmsk_scale(scheme)
    out = np.where(inside, g, 0.0)
    return out[()] if out.ndim == 0 else out


def phase_pulse_value(scheme: CpmScheme, t):
    """Phase pulse q(t): running integral of g, clamped to 0 before and 1/2 after the pulse."""
    t = np.asarray(t, dtype=float)
    NT = scheme.duration
    tc = np.clip(t, 0.0, NT)
    kind = scheme.pulse.kind
    if kind == "LREC":
        q = tc / (2 * NT)
    elif kind == "LRC":
        q = tc / (2 * NT) - np.sin(2 * np.pi * tc / NT) / (4 * np.pi)
    else:
        q = _gmsk_raw_cumulative(scheme, tc) * _gmsk_scale(scheme)
    q = np.where(t <= 0, 0.0, np.where(t >= NT, 0.5, q))
    return q[()] if q.ndim == 0 else q


def max_freq_pulse(scheme: CpmScheme) -> float:
    """sup g(t); every supported pulse peaks at the centre of its support."""
    if scheme.pulse.kind == "LREC":
        return 1.0 / (2 * scheme.duration)
    return float(freq_pulse_value(scheme, scheme.duration / 2))


def max_phase_slope(scheme: CpmScheme) -> float:
    """Largest |d phi/dt| any symbol sequence can produce (rad/s).

    Up to N pulses overlap, so the bound uses sup_t sum_j g(t + jT); for
    full response this is just sup g.
    """
    T = scheme.symbol_period
    tau = np.linspace(0.0, T, 2049)
    overlap = sum(freq_pulse_value(scheme, tau + j * T) for j in range(scheme.pulse_len))
    return 2 * np.pi * scheme.mod_index * (scheme.m_ary - 1) * float(np.max(overlap))


def sample_times(scheme: CpmScheme, n_symbols: int, samples_per_symbol: int = 16) -> np.ndarray:
    """Uniform grid over [0, (n_symbols + N) T], both ends included."""
    if samples_per_symbol < 2:
        raise ValueError("samples_per_symbol must be >= 2")
    n_intervals = (n_symbols + scheme.pulse_len) * samples_per_symbol
    return np.arange(n_intervals + 1) * (scheme.symbol_period / samples_per_symbol)


def phase_trajectory(scheme: CpmScheme, data, samples_per_symbol: int = 16) -> np.ndarray:
    """Information phase 2*pi*h * sum_i I_i q(t - iT) on the `sample_times` grid (radians)."""
    symbols = validate_symbols(scheme, data)
    t = sample_times(scheme, symbols.size, samples_per_symbol)
    T = scheme.symbol_period
    phase = np.zeros_like(t)
    for i, sym in enumerate(symbols):
        phase += sym * phase_pulse_value(scheme, t - i * T)
    return 2 * np.pi * scheme.mod_index * phase


def synthesize_baseband(
    scheme: CpmScheme, data, samples_per_symbol: int = 16, symbol_energy: float = 1.0
) -> np.ndarray:
    """Constant-envelope complex baseband samples sqrt(2E/T) * exp(j phi)."""
    if not symbol_energy > 0:
        raise ValueError("symbol_energy must be > 0")
    phi = phase_trajectory(scheme, data, samples_per_symbol)
    amp = sqrt(2 * symbol_energy / scheme.symbol_period)
    return amp * np.exp(1j * phi)


def is_rational_index(h: float, max_den: int = 64):
    """Return (p, q) when h is (numerically) a small-denominator rational, else None."""
    from fractions import Fraction

    frac = Fraction(h).limit_denominator(max_den)
    if isclose(float(frac), h, rel_tol=0, abs_tol=1e-12):
        return frac.numerator, frac.denominator
    return None
