import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from cpm_energy.energy import eb_per_bit
from cpm_energy.estimators import CpmModulator, EnergyPerBitModel, MinimumDistanceEstimator
from cpm_energy.scenario import Scenario
from cpm_energy.sweep import optimize_gamma


def test_modulator_params_and_clone():
    mod = CpmModulator(m_ary=4, pulse="LRC", samples_per_symbol=8)
    twin = clone(mod)
    assert twin.get_params() == mod.get_params()
    twin.set_params(m_ary=8)
    assert mod.m_ary == 4


def test_modulator_transform():
    X = np.array([[1, -3, 3, 1], [-1, -1, 1, 3]])
    mod = CpmModulator(m_ary=4, pulse="LRC", samples_per_symbol=8, symbol_energy=2.0).fit(X)
    Y = mod.transform(X)
    assert Y.shape == (2, (4 + 3) * 8 + 1)
    assert np.allclose(np.abs(Y), 2.0, rtol=1e-12)
    with pytest.raises(ValueError):
        mod.transform([[2, 1, 1, 1]])


def test_modulator_requires_fit():
    with pytest.raises(NotFittedError):
        CpmModulator().transform([[1]])


def test_distance_estimator_msk():
    est = MinimumDistanceEstimator(m_ary=2, mod_index=0.5, pulse_len=1, max_depth=4).fit()
    assert est.dmin_sq_ == pytest.approx(2.0, abs=1e-3)
    assert est.kmin_ == len(est.achieving_sequences_)


def test_energy_model_predict_matches_functional_core():
    sc = Scenario()
    model = EnergyPerBitModel("RC", sc).fit()
    g = np.array([[4.0], [8.0], [12.0]])
    expected = [eb_per_bit(sc.profile("RC"), sc.link_budget(), sc.error_model("RC"), sc.packet(), 56, 10.0,
                           10 ** (x / 10), 20e3).e_b for x in (4.0, 8.0, 12.0)]
    assert np.allclose(model.predict(g), expected, rtol=1e-15)
    assert model.predict([8.0]) == pytest.approx(expected[1])
    two_col = model.predict([[8.0, 50.0]])[0]
    assert two_col > expected[1]
    with pytest.raises(ValueError):
        model.predict(np.ones((2, 3)))


def test_energy_model_n_re_and_optimum():
    model = EnergyPerBitModel("QAM16").fit()
    nre = model.predict_n_re([6.0, 8.0, 10.0])
    assert np.all(np.diff(nre) < 0) and np.all(nre >= 1)
    assert model.optimal_gamma_db() == optimize_gamma(Scenario(), "QAM16")


def test_energy_model_kmin_override_and_errors():
    base = EnergyPerBitModel("GMSK").fit()
    tripled = EnergyPerBitModel("GMSK", kmin=3).fit()
    assert tripled.model_.kmin == 3
    assert tripled.predict([5.0])[0] > base.predict([5.0])[0]
    with pytest.raises(ValueError):
        EnergyPerBitModel("BPSK").fit()
    with pytest.raises(NotFittedError):
        EnergyPerBitModel().predict([8.0])
    assert clone(tripled).get_params()["kmin"] == 3
