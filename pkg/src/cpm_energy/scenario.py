"""Flat key=value scenario configuration.

Values are kept in the units users type (dB, mW, bytes); the
``link_budget``/``profile``/``packet`` accessors hand out linear SI records.
"""
from __future__ import annotations

from dataclasses import dataclass, field, fields, replace
from pathlib import Path

from .distance import resolve_dmin_sq
from .energy import LinkBudget, RadioProfile
from .error_models import PacketSpec, SchemeErrorModel
from .waveform import CpmScheme, PulseShape

SCHEME_NAMES = ("REC", "RC", "GMSK", "OQPSK", "QAM16")
CPM_NAMES = ("REC", "RC", "GMSK")


class ConfigError(ValueError):
    def __init__(self, key, message, line=None):
        self.key = key
        self.line = line
        where = f" (line {line})" if line is not None else ""
        super().__init__(f"{key}{where}: {message}")


def _floats(text):
    return tuple(float(v) for v in text.split(",") if v.strip())


def _ints(text):
    return tuple(int(v) for v in text.split(",") if v.strip())


def _names(text):
    return tuple(v.strip().upper() for v in text.split(",") if v.strip())


def _bool(text):
    t = text.strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _fmt(value):
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, tuple):
        return ",".join(_fmt(v) for v in value)
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _opt(parse, check=None, doc=""):
    return {"parse": parse, "check": check, "doc": doc}


def _positive(v):
    return v > 0


def _nonneg(v):
    return v >= 0


@dataclass(frozen=True)
class Scenario:
    # link budget and radio
    symbol_rate: float = field(default=20e3, metadata=_opt(float, _positive, "symbols/s"))
    pilot_bytes: int = field(default=4, metadata=_opt(int, _nonneg))
    header_bytes: int = field(default=3, metadata=_opt(int, _nonneg))
    payload_bytes: int = field(default=30, metadata=_opt(int, _nonneg))
    feedback_bytes: int = field(default=7, metadata=_opt(int, _nonneg, "ACK length; 0 disables feedback"))
    n0_dbm_hz: float = field(default=-174.0, metadata=_opt(float))
    n_f_db: float = field(default=10.0, metadata=_opt(float))
    a0_db: float = field(default=30.0, metadata=_opt(float))
    bandwidth_hz: float = field(default=20e3, metadata=_opt(float, _positive))
    m_l_db: float = field(default=10.0, metadata=_opt(float))
    alpha: float = field(default=3.5, metadata=_opt(float, lambda v: v >= 2))
    p_t0_mw: float = field(default=15.9, metadata=_opt(float, _nonneg))
    p_r0_mw: float = field(default=58.2, metadata=_opt(float, _nonneg))
    e_st_j: float = field(default=0.0, metadata=_opt(float, _nonneg))
    eta: float = field(default=0.7, metadata=_opt(float, lambda v: 0 < v <= 1, "CPM drain efficiency"))
    eta_oqpsk: float = field(default=0.35, metadata=_opt(float, lambda v: 0 < v <= 1))
    eta_qam16: float = field(default=0.35, metadata=_opt(float, lambda v: 0 < v <= 1))
    xi_db: float = field(default=0.0, metadata=_opt(float, _nonneg, "CPM PAPR"))
    xi_oqpsk_db: float = field(default=3.5, metadata=_opt(float, _nonneg))
    xi_qam16_db: float = field(default=6.7, metadata=_opt(float, _nonneg))
    # CPM waveform
    m_ary: int = field(default=16, metadata=_opt(int, lambda v: v >= 2 and not v & (v - 1)))
    h: float = field(default=0.75, metadata=_opt(float, _positive))
    pulse_len: int = field(default=3, metadata=_opt(int, lambda v: v >= 1))
    bt: float = field(default=0.3, metadata=_opt(float, _positive))
    kmin: int = field(default=1, metadata=_opt(int, lambda v: v >= 1))
    dmin_source: str = field(default="table", metadata=_opt(str.strip, lambda v: v in ("table", "search")))
    schemes: tuple = field(default=SCHEME_NAMES, metadata=_opt(
        _names, lambda v: bool(v) and all(s in SCHEME_NAMES for s in v)))
    # study settings
    distance_m: float = field(default=10.0, metadata=_opt(float, _positive))
    gamma_cpm_db: float = field(default=8.0, metadata=_opt(float))
    gamma_other_db: float = field(default=15.0, metadata=_opt(float))
    gamma_min_db: float = field(default=0.0, metadata=_opt(float))
    gamma_max_db: float = field(default=25.0, metadata=_opt(float))
    gamma_step_db: float = field(default=0.5, metadata=_opt(float, _positive))
    d_min_m: float = field(default=1.0, metadata=_opt(float, _positive))
    d_max_m: float = field(default=100.0, metadata=_opt(float, _positive))
    d_points: int = field(default=100, metadata=_opt(int, lambda v: v >= 1))
    d_log: bool = field(default=False, metadata=_opt(_bool))
    orders: tuple = field(default=(1, 2, 3, 4), metadata=_opt(
        _ints, lambda v: bool(v) and all(1 <= x <= 4 for x in v)))
    retx_gamma_db: tuple = field(default=(6.0, 8.0, 10.0), metadata=_opt(_floats, bool))
    opt_lo_db: float = field(default=0.0, metadata=_opt(float))
    opt_hi_db: float = field(default=25.0, metadata=_opt(float))
    opt_tol_db: float = field(default=0.05, metadata=_opt(float, _positive))
    # Monte Carlo
    seed: int = field(default=20240101, metadata=_opt(int, lambda v: 0 <= v < 2**64))
    trials: int = field(default=100_000, metadata=_opt(int, lambda v: v >= 1))
    mc_sep: tuple = field(default=(1e-3, 1e-2, 5e-2), metadata=_opt(
        _floats, lambda v: bool(v) and all(0 <= x < 1 for x in v)))
    max_rounds: int = field(default=100_000, metadata=_opt(int, lambda v: v >= 1))
    # waveform check
    samples_per_symbol: int = field(default=16, metadata=_opt(int, lambda v: v >= 2))
    envelope_symbols: int = field(default=64, metadata=_opt(int, lambda v: v >= 1))

    def __post_init__(self):
        if self.gamma_min_db >= self.gamma_max_db:
            raise ConfigError("gamma_max_db", "must exceed gamma_min_db")
        if self.d_min_m >= self.d_max_m and self.d_points > 1:
            raise ConfigError("d_max_m", "must exceed d_min_m")
        if self.opt_lo_db >= self.opt_hi_db:
            raise ConfigError("opt_hi_db", "must exceed opt_lo_db")
        if 8 * (self.pilot_bytes + self.header_bytes + self.payload_bytes) <= 0:
            raise ConfigError("payload_bytes", "packet is empty")

    # linear records ---------------------------------------------------
    def link_budget(self) -> LinkBudget:
        return LinkBudget.from_db(
            a0_db=self.a0_db, alpha=self.alpha, n0_dbm_hz=self.n0_dbm_hz,
            bandwidth_w=self.bandwidth_hz, n_f_db=self.n_f_db, m_l_db=self.m_l_db,
        )

    def profile(self, scheme_name: str) -> RadioProfile:
        name = scheme_name.upper()
        if name in CPM_NAMES:
            eta, xi_db = self.eta, self.xi_db
        elif name == "OQPSK":
            eta, xi_db = self.eta_oqpsk, self.xi_oqpsk_db
        else:
            eta, xi_db = self.eta_qam16, self.xi_qam16_db
        return RadioProfile.from_db(
            p_t0=self.p_t0_mw * 1e-3, p_r0=self.p_r0_mw * 1e-3, eta=eta, xi_db=xi_db, e_st=self.e_st_j
        )

    def packet(self) -> PacketSpec:
        return PacketSpec(self.pilot_bytes, self.header_bytes, self.payload_bytes)

    @property
    def feedback_bits(self) -> int:
        return 8 * self.feedback_bytes

    def cpm_scheme(self, name: str, m_ary: int | None = None) -> CpmScheme:
        return CpmScheme(
            m_ary=m_ary or self.m_ary,
            mod_index=self.h,
            pulse_len=self.pulse_len,
            pulse=PulseShape(name, self.bt),
            symbol_period=1.0 / self.symbol_rate,
        )

    def error_model(self, name: str, m_ary: int | None = None) -> SchemeErrorModel:
        name = name.upper()
        if name == "OQPSK":
            return SchemeErrorModel.oqpsk()
        if name == "QAM16":
            return SchemeErrorModel.qam16()
        scheme = self.cpm_scheme(name, m_ary)
        if self.dmin_source == "table":
            d2 = resolve_dmin_sq(scheme)
        else:
            from .distance import dmin_search
            d2 = dmin_search(scheme).dmin_sq
        return SchemeErrorModel.cpm(d2, self.kmin, scheme.bits_per_symbol)

    def default_gamma_db(self, name: str) -> float:
        return self.gamma_cpm_db if name.upper() in CPM_NAMES else self.gamma_other_db

    # serialisation ----------------------------------------------------
    def to_text(self) -> str:
        return "".join(f"{f.name}={_fmt(getattr(self, f.name))}\n" for f in fields(self))

    def with_overrides(self, **kw) -> "Scenario":
        return replace(self, **kw)


_FIELDS = {f.name: f for f in fields(Scenario)}


def _parse_pair(key, raw, line=None):
    if key not in _FIELDS:
        raise ConfigError(key, "unknown key", line)
    meta = _FIELDS[key].metadata
    try:
        value = meta["parse"](raw)
    except ValueError as exc:
        raise ConfigError(key, f"cannot parse {raw!r} ({exc})", line) from None
    check = meta["check"]
    if check is not None and not check(value):
        raise ConfigError(key, f"value {raw!r} out of range", line)
    return value


def parse_lines(lines, source_line_numbers=True) -> dict:
    values = {}
    for lineno, text in enumerate(lines, start=1):
        body = text.split("#", 1)[0].strip()
        if not body:
            continue
        if "=" not in body:
            raise ConfigError(body, "expected key=value", lineno if source_line_numbers else None)
        key, raw = (s.strip() for s in body.split("=", 1))
        values[key] = _parse_pair(key, raw, lineno if source_line_numbers else None)
    return values


def load_scenario(path=None, overrides=()) -> Scenario:
    """Build a Scenario from defaults, an optional file, then ``key=value`` overrides."""
    values = {}
    if path is not None:
        p = Path(path)
        if not p.is_file():
            raise ConfigError(str(path), "config file not found")
        values.update(parse_lines(p.read_text(encoding="utf-8").splitlines()))
    for item in overrides:
        if "=" not in item:
            raise ConfigError(item, "override must be key=value")
        key, raw = (s.strip() for s in item.split("=", 1))
        values[key] = _parse_pair(key, raw)
    try:
        return Scenario(**values)
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError("scenario", str(exc)) from None
