"""scikit-learn style wrappers around the functional core.

These let the modulator and the energy model sit inside pipelines and
grid searches (``get_params``/``set_params``/``clone`` all work).
"""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, RegressorMixin, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .distance import dmin_search
from .energy import db_to_linear, eb_per_bit
from .error_models import n_re, sep
from .scenario import CPM_NAMES, SCHEME_NAMES, Scenario
from .sweep import optimize_gamma
from .waveform import CpmScheme, PulseShape, max_freq_pulse, synthesize_baseband, validate_symbols


class CpmModulator(TransformerMixin, BaseEstimator):
    """Map rows of M-ary symbols to constant-envelope complex baseband bursts."""

    def __init__(self, m_ary=2, mod_index=0.75, pulse_len=3, pulse="LREC", bt_product=0.3,
                 symbol_period=1.0, samples_per_symbol=16, symbol_energy=1.0):
        self.m_ary = m_ary
        self.mod_index = mod_index
        self.pulse_len = pulse_len
        self.pulse = pulse
        self.bt_product = bt_product
        self.symbol_period = symbol_period
        self.samples_per_symbol = samples_per_symbol
        self.symbol_energy = symbol_energy

    def fit(self, X=None, y=None):
        self.scheme_ = CpmScheme(self.m_ary, self.mod_index, self.pulse_len,
                                 PulseShape(self.pulse, self.bt_product), self.symbol_period)
        if self.samples_per_symbol < 2:
            raise ValueError("samples_per_symbol must be >= 2")
        if not self.symbol_energy > 0:
            raise ValueError("symbol_energy must be > 0")
        self.amplitude_ = np.sqrt(2 * self.symbol_energy / self.symbol_period)
        self.max_freq_pulse_ = max_freq_pulse(self.scheme_)
        if X is not None:
            self.n_features_in_ = check_array(X, dtype=None).shape[1]
        return self

    def transform(self, X):
        check_is_fitted(self, "scheme_")
        X = check_array(X, dtype=np.int64)
        out = [synthesize_baseband(self.scheme_, validate_symbols(self.scheme_, row),
                                   self.samples_per_symbol, self.symbol_energy) for row in X]
        return np.vstack(out)


class MinimumDistanceEstimator(BaseEstimator):
    """Searches d^2_min / K_min for one CPM configuration on ``fit``."""

    def __init__(self, m_ary=2, mod_index=0.75, pulse_len=3, pulse="LREC", bt_product=0.3,
                 max_depth=None, prune_margin=0.0):
        self.m_ary = m_ary
        self.mod_index = mod_index
        self.pulse_len = pulse_len
        self.pulse = pulse
        self.bt_product = bt_product
        self.max_depth = max_depth
        self.prune_margin = prune_margin

    def fit(self, X=None, y=None):
        scheme = CpmScheme(self.m_ary, self.mod_index, self.pulse_len, PulseShape(self.pulse, self.bt_product))
        res = dmin_search(scheme, self.max_depth, self.prune_margin)
        self.result_ = res
        self.dmin_sq_ = res.dmin_sq
        self.kmin_ = res.kmin
        self.achieving_sequences_ = res.achieving_sequences
        return self


class EnergyPerBitModel(RegressorMixin, BaseEstimator):
    """Energy per delivered bit as a function of received SNR.

    ``predict`` takes one column of SNR values in dB, optionally a second
    column of distances in metres (otherwise ``distance_m`` is used).
    """

    def __init__(self, scheme="REC", scenario=None, distance_m=None, kmin=None):
        self.scheme = scheme
        self.scenario = scenario
        self.distance_m = distance_m
        self.kmin = kmin

    def fit(self, X=None, y=None):
        sc = self.scenario if self.scenario is not None else Scenario()
        if self.kmin is not None:
            sc = sc.with_overrides(kmin=int(self.kmin))
        name = self.scheme.upper()
        if name not in SCHEME_NAMES:
            raise ValueError(f"unknown scheme {self.scheme!r}")
        self.scenario_ = sc
        self.model_ = sc.error_model(name)
        self.profile_ = sc.profile(name)
        self.link_ = sc.link_budget()
        self.packet_ = sc.packet()
        self.is_cpm_ = name in CPM_NAMES
        return self

    def _inputs(self, X):
        X = check_array(X, ensure_2d=False, dtype=float)
        if X.ndim == 1:
            X = X[:, None]
        if X.shape[1] not in (1, 2):
            raise ValueError("X must have one (gamma_db) or two (gamma_db, distance_m) columns")
        d_default = self.distance_m if self.distance_m is not None else self.scenario_.distance_m
        d = X[:, 1] if X.shape[1] == 2 else np.full(X.shape[0], d_default)
        return X[:, 0], d

    def breakdown(self, X):
        check_is_fitted(self, "model_")
        g_db, d = self._inputs(X)
        fb = self.scenario_.feedback_bits or None
        return [eb_per_bit(self.profile_, self.link_, self.model_, self.packet_, fb, float(di),
                           float(db_to_linear(gi)), self.scenario_.symbol_rate) for gi, di in zip(g_db, d)]

    def predict(self, X):
        return np.array([b.e_b for b in self.breakdown(X)])

    def predict_n_re(self, X):
        check_is_fitted(self, "model_")
        g_db, _ = self._inputs(X)
        return np.asarray(n_re(sep(self.model_, db_to_linear(g_db)), self.packet_, self.model_.m), dtype=float)

    def optimal_gamma_db(self, bracket_db=None, tol_db=None):
        check_is_fitted(self, "model_")
        return optimize_gamma(self.scenario_, self.scheme, bracket_db, tol_db, d=self.distance_m)
