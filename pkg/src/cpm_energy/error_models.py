"""Symbol-error, packet-error and retransmission statistics."""
from __future__ import annotations

from dataclasses import dataclass
from math import ceil, sqrt

import numpy as np
from scipy.special import erfc


class PacketNeverSucceedsError(ValueError):
    """SEP of 1: no packet can ever get through."""


def q_function(x):
    """Gaussian tail Q(x) = 0.5 * erfc(x / sqrt(2))."""
    out = 0.5 * erfc(np.asarray(x, dtype=float) / sqrt(2.0))
    return out[()] if np.ndim(out) == 0 else out


@dataclass(frozen=True)
class SchemeErrorModel:
    """Union-bound CPM, coherent OQPSK, or square 16QAM.

    Use the ``cpm``/``oqpsk``/``qam16`` constructors rather than building
    one by hand.
    """

    variant: str
    dmin_sq: float | None = None
    kmin: int = 1
    m: int = 2

    def __post_init__(self):
        v = self.variant.upper()
        object.__setattr__(self, "variant", v)
        if v == "CPM":
            if self.dmin_sq is None or not self.dmin_sq > 0:
                raise ValueError("CPM error model needs dmin_sq > 0")
            if int(self.kmin) != self.kmin or self.kmin < 1:
                raise ValueError("kmin must be an integer >= 1")
            if self.m not in (1, 2, 3, 4):
                raise ValueError("CPM bits per symbol must be in {1, 2, 3, 4}")
        elif v == "OQPSK":
            if self.m != 2:
                raise ValueError("OQPSK carries 2 bits per symbol")
        elif v == "QAM16":
            if self.m != 4:
                raise ValueError("16QAM carries 4 bits per symbol")
        else:
            raise ValueError(f"unknown error model variant {self.variant!r}")

    @classmethod
    def cpm(cls, dmin_sq: float, kmin: int = 1, m: int = 4) -> "SchemeErrorModel":
        return cls("CPM", dmin_sq=float(dmin_sq), kmin=int(kmin), m=int(m))

    @classmethod
    def oqpsk(cls) -> "SchemeErrorModel":
        return cls("OQPSK", m=2)

    @classmethod
    def qam16(cls) -> "SchemeErrorModel":
        return cls("QAM16", m=4)


def sep(model: SchemeErrorModel, gamma):
    """Symbol error probability at linear SNR `gamma`, clamped to [0, 1]."""
    g = np.asarray(gamma, dtype=float)
    if np.any(g < 0) or np.any(np.isnan(g)):
        raise ValueError("gamma must be >= 0")
    if model.variant == "CPM":
        p = model.kmin * q_function(np.sqrt(model.dmin_sq * g))
    elif model.variant == "OQPSK":
        qv = q_function(np.sqrt(g))
        p = 2 * qv - qv * qv
    else:
        p4 = 1.5 * q_function(np.sqrt(g / 5.0))
        p = 1 - (1 - p4) ** 2
    p = np.clip(p, 0.0, 1.0)
    return p[()] if np.ndim(p) == 0 else p


@dataclass(frozen=True)
class PacketSpec:
    """Pilot / header / payload lengths in bytes."""

    pilot_len: int = 4
    header_len: int = 3
    payload_len: int = 30

    def __post_init__(self):
        for name in ("pilot_len", "header_len", "payload_len"):
            v = getattr(self, name)
            if int(v) != v or v < 0:
                raise ValueError(f"{name} must be a nonnegative integer")
        if self.total_bits <= 0:
            raise ValueError("packet must carry at least one bit")

    @property
    def total_bits(self) -> int:
        return 8 * (self.pilot_len + self.header_len + self.payload_len)

    def n_symbols(self, m: int) -> int:
        return n_symbols(self.total_bits, m)


def n_symbols(total_bits: int, m: int) -> int:
    """Symbols per packet; a partial symbol still takes a slot."""
    if m < 1:
        raise ValueError("bits per symbol must be >= 1")
    return int(ceil(total_bits / m))


def _nsym(packet, m):
    return packet.n_symbols(m) if isinstance(packet, PacketSpec) else n_symbols(int(packet), m)


def pep(sep_value, packet, m: int):
    """Packet error probability 1 - (1 - SEP)^(symbols per packet).

    `packet` is a PacketSpec or a bit count.
    """
    s = np.asarray(sep_value, dtype=float)
    if np.any((s < 0) | (s > 1)):
        raise ValueError("sep must be in [0, 1]")
    n = _nsym(packet, m)
    out = -np.expm1(n * np.log1p(-s)) if np.all(s < 1) else 1 - (1 - s) ** n
    return out[()] if np.ndim(out) == 0 else out


def delivered_bits(sep_value, packet, m: int):
    """Average payload bits delivered per transmission, L (1 - SEP)^(symbols)."""
    L = packet.total_bits if isinstance(packet, PacketSpec) else int(packet)
    return L * (1 - np.asarray(sep_value, dtype=float)) ** _nsym(packet, m)


def n_re(sep_value, packet, m: int):
    """Mean number of transmissions per delivered packet, (1 - SEP)^-(symbols)."""
    s = np.asarray(sep_value, dtype=float)
    if np.any(s >= 1):
        raise PacketNeverSucceedsError("SEP = 1: packet can never succeed")
    if np.any(s < 0):
        raise ValueError("sep must be in [0, 1)")
    out = np.exp(-_nsym(packet, m) * np.log1p(-s))
    return out[()] if np.ndim(out) == 0 else out
