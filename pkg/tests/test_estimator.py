from fractions import Fraction

import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from afav.errors import InputError, ParameterError
from afav.estimator import (
    MachineVerifier,
    SubsetSumVerifier,
    UnaryVerifier,
    UPolyVerifier,
    USquareVerifier,
)
from afav.oracles import perfect_square, subsetsum_membership
from afav.protocols import UnaryLanguageSpec

from helpers import toy_machine

EVENS = UnaryLanguageSpec.periodic_language("", "10")


def test_subsetsum_predict_and_score():
    X = ["11#10#1", "10#11", "0#1", "100#1#1"]
    est = SubsetSumVerifier(t=2).fit(X)
    assert est.epsilon_ == Fraction(1, 5)
    assert list(est.predict(X)) == [1, 0, 1, 0]
    assert list(est.decision_function(X)) == [1, Fraction(1, 5), 1, Fraction(1, 9)]
    y = [int(subsetsum_membership(x)) for x in X]
    assert est.score(X, y) == 1.0
    proba = est.predict_proba(X)
    assert proba.shape == (4, 2) and np.allclose(proba.sum(axis=1), 1)


def test_usquare_accepts_lengths():
    est = USquareVerifier(t=1).fit()
    lengths = list(range(20))
    assert list(est.predict(lengths)) == [int(perfect_square(n)) for n in lengths]
    assert list(est.predict(np.array(lengths).reshape(-1, 1))) == list(est.predict(lengths))
    assert list(est.predict(["0000", "000"])) == [1, 0]


def test_upoly_string_coefficients():
    est = UPolyVerifier(coefficients="0,1,1", t=3).fit()
    assert list(est.predict([0, 2, 5, 6, 12])) == [1, 1, 0, 1, 1]


def test_unary_verifier():
    est = UnaryVerifier(language=EVENS, prune=True).fit()
    assert est.config_.k == Fraction(283, 100)
    assert est.epsilon_ == Fraction(155, 1000)
    assert list(est.predict(range(6))) == [1, 0, 1, 0, 1, 0]


def test_inconclusive_is_minus_one():
    est = MachineVerifier(machine=toy_machine(), epsilon=Fraction(0)).fit()
    labels = est.predict(["", "x", "xx"])
    assert set(labels) <= {-1, 0, 1}
    assert -1 in labels


def test_params_and_clone():
    est = SubsetSumVerifier(t=3, threads=2)
    assert est.get_params()["t"] == 3
    copy = clone(est)
    assert copy.get_params() == est.get_params()
    assert not hasattr(copy, "machine_")
    est.set_params(t=1)
    assert est.fit().epsilon_ == Fraction(1, 3)


def test_errors():
    with pytest.raises(NotFittedError):
        SubsetSumVerifier().predict(["1#1"])
    with pytest.raises(ParameterError):
        MachineVerifier().fit()
    with pytest.raises(ParameterError):
        UnaryVerifier().fit()
    with pytest.raises(ParameterError):
        SubsetSumVerifier(epsilon=Fraction(1, 2)).fit()
    est = SubsetSumVerifier().fit()
    with pytest.raises(InputError):
        est.predict(["1#2"])
    with pytest.raises((InputError, ParameterError)):
        est.fit(["1#1"], [1, 0])
