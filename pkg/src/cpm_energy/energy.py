"""Circuit power, link budget and energy per successfully delivered bit.

All arithmetic is SI and linear; dB only enters through the ``*_db``
helpers and the ``from_db`` constructors.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .error_models import PacketSpec, SchemeErrorModel, n_re, sep


def db_to_linear(x_db):
    return 10.0 ** (np.asarray(x_db, dtype=float) / 10.0)


def linear_to_db(x):
    return 10.0 * np.log10(x)


def dbm_to_watts(x_dbm):
    return 10.0 ** ((np.asarray(x_dbm, dtype=float) - 30.0) / 10.0)


def watts_to_dbm(p):
    return 10.0 * np.log10(p) + 30.0


@dataclass(frozen=True)
class RadioProfile:
    """Transceiver circuit constants (W, J, linear)."""

    p_t0: float = 15.9e-3
    p_r0: float = 58.2e-3
    eta: float = 0.7
    xi: float = 1.0
    e_st: float = 0.0

    def __post_init__(self):
        if not 0 < self.eta <= 1:
            raise ValueError("eta must be in (0, 1]")
        if self.xi < 1:
            raise ValueError("xi (PAPR, linear) must be >= 1")
        for name in ("p_t0", "p_r0", "e_st"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0")

    @classmethod
    def from_db(cls, p_t0=15.9e-3, p_r0=58.2e-3, eta=0.7, xi_db=0.0, e_st=0.0):
        return cls(p_t0=p_t0, p_r0=p_r0, eta=eta, xi=float(db_to_linear(xi_db)), e_st=e_st)


# drain efficiency and PAPR per modulation family
FAMILY_PA = {
    "CPM": (0.7, 0.0),
    "OQPSK": (0.35, 3.5),
    "QAM16": (0.35, 6.7),
}


def profile_for(variant: str, p_t0=15.9e-3, p_r0=58.2e-3, e_st=0.0) -> RadioProfile:
    eta, xi_db = FAMILY_PA[variant.upper()]
    return RadioProfile.from_db(p_t0=p_t0, p_r0=p_r0, eta=eta, xi_db=xi_db, e_st=e_st)


@dataclass(frozen=True)
class LinkBudget:
    """Friis-type link: P_T = a0 * n0 * W * n_f * m_l * d^alpha * gamma."""

    a0: float = 1e3
    alpha: float = 3.5
    n0: float = 10 ** (-17.4) * 1e-3
    bandwidth_w: float = 20e3
    n_f: float = 10.0
    m_l: float = 10.0

    def __post_init__(self):
        if self.alpha < 2:
            raise ValueError("alpha must be >= 2")
        for name in ("a0", "n0", "bandwidth_w", "n_f", "m_l"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be > 0")

    @classmethod
    def from_db(cls, a0_db=30.0, alpha=3.5, n0_dbm_hz=-174.0, bandwidth_w=20e3, n_f_db=10.0, m_l_db=10.0):
        return cls(
            a0=float(db_to_linear(a0_db)),
            alpha=alpha,
            n0=float(dbm_to_watts(n0_dbm_hz)),
            bandwidth_w=bandwidth_w,
            n_f=float(db_to_linear(n_f_db)),
            m_l=float(db_to_linear(m_l_db)),
        )

    @property
    def a(self) -> float:
        return self.a0 * self.n0 * self.bandwidth_w * self.n_f * self.m_l


def _check_distance(d):
    if np.any(np.asarray(d) <= 0):
        raise ValueError("distance must be > 0")


def transmit_power(link: LinkBudget, d, gamma):
    """Radiated power (W) needed for received SNR `gamma` at distance `d` metres."""
    _check_distance(d)
    if np.any(np.asarray(gamma) < 0):
        raise ValueError("gamma must be >= 0")
    return link.a * np.power(d, link.alpha) * gamma


def received_snr(link: LinkBudget, d, p_t):
    """Inverse of `transmit_power`."""
    _check_distance(d)
    if np.any(np.asarray(p_t) < 0):
        raise ValueError("p_t must be >= 0")
    return p_t / (link.a0 * np.power(d, link.alpha)) / (link.n0 * link.bandwidth_w * link.n_f * link.m_l)


def tx_power_consumption(profile: RadioProfile, p_t):
    """Total transmitter draw: circuits plus PA."""
    if np.any(np.asarray(p_t) < 0):
        raise ValueError("p_t must be >= 0")
    return profile.p_t0 + (profile.xi / profile.eta) * p_t


@dataclass(frozen=True)
class TimingPlan:
    t_dta: float
    t_dra: float
    t_fta: float
    t_fra: float


def _bits(p):
    return p.total_bits if isinstance(p, PacketSpec) else int(p)


def timing(packet, feedback, m: int, symbol_rate: float) -> TimingPlan:
    """On-air durations; the receiver is active exactly while a packet is on air."""
    if not symbol_rate > 0:
        raise ValueError("symbol_rate must be > 0")
    n_fw = -(-_bits(packet) // m)
    n_fb = -(-_bits(feedback) // m) if _bits(feedback) > 0 else 0
    t_dta = n_fw / symbol_rate
    t_fta = n_fb / symbol_rate
    return TimingPlan(t_dta=t_dta, t_dra=t_dta, t_fta=t_fta, t_fra=t_fta)


@dataclass(frozen=True)
class EnergyBreakdown:
    e_fw: float
    e_rv: float
    n_re: float
    e_b: float
    p_t_forward: float
    p_t_feedback: float
    sep: float = 0.0

    @property
    def round_energy(self) -> float:
        return self.e_fw + self.e_rv


def round_energy(profile: RadioProfile, link: LinkBudget, packet, feedback, m: int, d, gamma, symbol_rate: float,
                 gamma_feedback=None):
    """(E_FW, E_RV, P_T forward, P_T feedback) for one data/ACK round."""
    gamma_fb = gamma if gamma_feedback is None else gamma_feedback
    plan = timing(packet, feedback, m, symbol_rate)
    p_t = transmit_power(link, d, gamma)
    p_t_fb = transmit_power(link, d, gamma_fb)
    e_fw = 2 * profile.e_st + tx_power_consumption(profile, p_t) * plan.t_dta + profile.p_r0 * plan.t_dra
    e_rv = tx_power_consumption(profile, p_t_fb) * plan.t_fta + profile.p_r0 * plan.t_fra
    return e_fw, e_rv, p_t, p_t_fb


def eb_per_bit(
    profile: RadioProfile,
    link: LinkBudget,
    model: SchemeErrorModel,
    packet: PacketSpec,
    feedback,
    d: float,
    gamma: float,
    symbol_rate: float = 20e3,
    gamma_feedback: float | None = None,
) -> EnergyBreakdown:
    """Energy per successfully delivered bit, retransmissions and ACKs included.

    `feedback` may be a PacketSpec, a bit count, or None for no ACK traffic.
    """
    fb = 0 if feedback is None else feedback
    m = model.m
    p_sym = float(sep(model, gamma))
    nre = float(n_re(p_sym, packet, m))
    e_fw, e_rv, p_t, p_t_fb = round_energy(profile, link, packet, fb, m, d, gamma, symbol_rate, gamma_feedback)
    L = _bits(packet)
    return EnergyBreakdown(
        e_fw=float(e_fw),
        e_rv=float(e_rv),
        n_re=nre,
        e_b=float(nre * (e_fw + e_rv) / L),
        p_t_forward=float(p_t),
        p_t_feedback=float(p_t_fb),
        sep=p_sym,
    )
