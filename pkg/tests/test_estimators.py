import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from aperiodic_lti import (
    AperiodicDiscretizer,
    InadmissibleSequenceError,
    PeriodicDiscretizer,
    SamplingSchedule,
    TransferFunction,
    convolution_oracle,
    periodic_model,
)


def test_params_round_trip():
    est = AperiodicDiscretizer(num=[1.0], den=[1.0, 3.0, 2.0], hold="zoh")
    params = est.get_params()
    assert params == {"num": [1.0], "den": [1.0, 3.0, 2.0], "hold": "zoh", "fail_fast": True}
    assert clone(est).get_params() == params
    est.set_params(hold="impulse")
    assert est.hold == "impulse"


def test_aperiodic_fit_predict():
    instants = np.cumsum(np.r_[0.0, np.random.default_rng(0).uniform(0.2, 1.0, 20)])
    est = AperiodicDiscretizer(den=[1.0, 3.0, 2.0], hold="zoh").fit(instants)
    assert est.f_.shape == (19, 2) and est.g_.shape == (19, 3)
    u = np.sin(instants)
    ref = convolution_oracle(TransferFunction([1.0], [1.0, 3.0, 2.0]),
                             SamplingSchedule(instants), u, "zoh")
    np.testing.assert_allclose(est.predict(u), ref, rtol=1e-9, atol=1e-12)


def test_aperiodic_inadmissible():
    instants = np.cumsum([0.0, 0.5, np.pi, 0.7, 0.4])
    with pytest.raises(InadmissibleSequenceError):
        AperiodicDiscretizer(den=[1.0, 0.0, 1.0]).fit(instants)
    est = AperiodicDiscretizer(den=[1.0, 0.0, 1.0], fail_fast=False).fit(instants)
    assert [c.status for c in est.coefficients_].count("inadmissible") == 1


def test_periodic_fit_predict():
    est = PeriodicDiscretizer(den=[1.0, 3.0, 2.0], T0=0.5).fit()
    m = periodic_model(TransferFunction([1.0], [1.0, 3.0, 2.0]), 0.5)
    np.testing.assert_array_equal(est.a_, m.a)
    np.testing.assert_array_equal(est.b_, m.b)
    u = np.ones(10)
    np.testing.assert_array_equal(est.predict(u), m.simulate(u))


def test_not_fitted():
    with pytest.raises(NotFittedError):
        AperiodicDiscretizer().predict([1.0, 2.0])
    with pytest.raises(NotFittedError):
        PeriodicDiscretizer().predict([1.0])
    with pytest.raises(NotFittedError):
        AperiodicDiscretizer().f_


@pytest.mark.parametrize("kw", [{"hold": "foh"}, {"T0": 0.0}, {"dead_time": -1.0},
                                {"den": [0.0, 1.0]}])
def test_periodic_bad_params(kw):
    with pytest.raises(ValueError):
        PeriodicDiscretizer(**kw).fit()


def test_predict_length_mismatch():
    est = AperiodicDiscretizer().fit([0.0, 1.0, 2.0])
    with pytest.raises(ValueError):
        est.predict([1.0, 2.0])
