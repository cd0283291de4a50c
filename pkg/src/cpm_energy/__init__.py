"""Energy-per-bit analysis of continuous phase modulation for ARQ sensor links."""

__version__ = "0.1.0"

from .distance import (
    DifferenceSequence,
    DistanceResult,
    NoMergedEventError,
    dmin_search,
    phase_difference_integral,
    table_lookup,
)
from .energy import (
    EnergyBreakdown,
    LinkBudget,
    RadioProfile,
    TimingPlan,
    eb_per_bit,
    received_snr,
    timing,
    transmit_power,
    tx_power_consumption,
)
from .error_models import PacketNeverSucceedsError, PacketSpec, SchemeErrorModel, n_re, pep, q_function, sep
from .estimators import CpmModulator, EnergyPerBitModel, MinimumDistanceEstimator
from .montecarlo import TrialConfig, TrialStats, compare_to_analytic, simulate_link
from .scenario import ConfigError, Scenario, load_scenario
from .sweep import CurveDataset, SweepSpec, optimize_gamma, sweep, unimodality_check
from .waveform import (
    CpmScheme,
    PulseShape,
    freq_pulse_value,
    phase_pulse_value,
    phase_trajectory,
    synthesize_baseband,
)

__all__ = [
    "ConfigError",
    "CpmModulator",
    "CpmScheme",
    "CurveDataset",
    "DifferenceSequence",
    "DistanceResult",
    "EnergyBreakdown",
    "EnergyPerBitModel",
    "LinkBudget",
    "MinimumDistanceEstimator",
    "NoMergedEventError",
    "PacketNeverSucceedsError",
    "PacketSpec",
    "PulseShape",
    "RadioProfile",
    "Scenario",
    "SchemeErrorModel",
    "SweepSpec",
    "TimingPlan",
    "TrialConfig",
    "TrialStats",
    "compare_to_analytic",
    "dmin_search",
    "eb_per_bit",
    "freq_pulse_value",
    "load_scenario",
    "n_re",
    "optimize_gamma",
    "pep",
    "phase_difference_integral",
    "phase_pulse_value",
    "phase_trajectory",
    "q_function",
    "received_snr",
    "sep",
    "simulate_link",
    "sweep",
    "synthesize_baseband",
    "table_lookup",
    "timing",
    "transmit_power",
    "tx_power_consumption",
    "unimodality_check",
]
