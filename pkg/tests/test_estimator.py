import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from iplr.estimator import InterlacedLatticeRule
from iplr.integrand import PolyProductIntegrand
from iplr.validation import check_criterion, check_int, check_weights
from iplr.walsh import Weights


def test_get_and_set_params():
    est = InterlacedLatticeRule(m=5, s=3)
    params = est.get_params()
    assert params["m"] == 5 and params["s"] == 3 and params["algorithm"] == "fast-cbc"
    est.set_params(m=6)
    assert est.m == 6
    assert clone(est).get_params() == est.get_params()


def test_fit_sets_attributes():
    est = InterlacedLatticeRule(m=4, s=2, algorithm="cbc").fit()
    assert est.generating_vector_ == [1, 10, 4, 15]
    assert est.criterion_value_ == pytest.approx(0.2452239990234375, rel=1e-12)
    assert len(est.trace_) == 4
    assert est.points().shape == (16, 2)
    assert est.score() == pytest.approx(-est.criterion_value_, rel=1e-12)


def test_integrate():
    est = InterlacedLatticeRule(m=10, s=2).fit()
    f = PolyProductIntegrand.harmonic(2)
    assert abs(est.integrate(f) - 1.0) < 1e-4
    with pytest.raises(ValueError):
        est.integrate(lambda x: np.ones(3))


def test_unfitted():
    with pytest.raises(NotFittedError):
        InterlacedLatticeRule().points()


@pytest.mark.parametrize("kwargs", [
    {"m": 0}, {"b": 4}, {"d": 1}, {"criterion": "b3"}, {"algorithm": "sieve"},
    {"criterion": "b2", "d": 3, "alpha": 2}, {"weights": [1.0]},
])
def test_invalid_params(kwargs):
    with pytest.raises(ValueError):
        InterlacedLatticeRule(**kwargs).fit()


def test_validation_helpers():
    with pytest.raises(TypeError):
        check_int(2.5, "m")
    with pytest.raises(TypeError):
        check_int(True, "m")
    assert check_criterion("b1", None, 3).alpha == 3
    assert check_criterion("B2", 3, 2).name == "B2"
    w = check_weights(None, 3)
    assert w.gammas == (1.0, 0.25, 1 / 9)
    assert check_weights({"kind": "product", "gammas": [0.5]}, 1) == Weights.product([0.5])
    with pytest.raises(TypeError):
        check_weights("abc", 1)
