from fractions import Fraction

import pytest

from afav.engine import enumerate_paths, run_many
from afav.errors import ParameterError
from afav.gadgets import PolynomialSpec
from afav.oracles import perfect_square, poly_image_member
from afav.protocols import build_upoly_verifier, build_usquare_verifier
from afav.verification import ACCEPT, REJECT, decide


def _fork_path(i, l):
    """Choice sequence of the path that forks on the i-th symbol (1-based)."""
    return (0,) + (0,) * (i - 1) + (1,) + (0,) * (l - i) + (0,)


def test_usquare_member_example():
    enum = enumerate_paths(build_usquare_verifier(1), "0000")
    by_choice = {o.choices: o.accept_probability for o in enum.outcomes}
    assert by_choice[_fork_path(2, 4)] == 1
    assert len(enum.outcomes) == 5


def test_usquare_nonmember_example():
    enum = enumerate_paths(build_usquare_verifier(1), "000")
    assert max(enum.probabilities) == Fraction(1, 3)


def test_usquare_empty_input_accepted_classically():
    enum = enumerate_paths(build_usquare_verifier(1), "")
    assert len(enum.outcomes) == 1 and enum.outcomes[0].accept_probability == 1


@pytest.mark.parametrize("l", range(0, 12))
def test_usquare_has_l_plus_one_paths(l):
    assert len(enumerate_paths(build_usquare_verifier(1), "0" * l).outcomes) == l + 1


def test_upoly_examples():
    enum = enumerate_paths(build_upoly_verifier(PolynomialSpec((0, 1, 1)), 2), "0" * 6)
    by_choice = {o.choices: o.accept_probability for o in enum.outcomes}
    assert by_choice[_fork_path(2, 6)] == 1
    cube = enumerate_paths(build_upoly_verifier(PolynomialSpec((0, 0, 0, 1)), 1), "0" * 7)
    assert max(cube.probabilities) == Fraction(1, 3)


def test_upoly_rejects_invalid_polynomial():
    with pytest.raises(ParameterError):
        build_upoly_verifier((0, 3), 1)
    with pytest.raises(ParameterError):
        build_upoly_verifier("x^2", 1)
    with pytest.raises(ParameterError):
        build_usquare_verifier(0)


@pytest.mark.parametrize("t", [1, 3])
def test_upoly_square_matches_usquare_path_for_path(t):
    words = ["0" * l for l in range(30)]
    sq = run_many(build_usquare_verifier(t), words)
    poly = run_many(build_upoly_verifier(PolynomialSpec((0, 0, 1)), t), words)
    for w in words:
        assert [(o.choices, o.final_classical, o.accept_probability) for o in sq[w].outcomes] == [
            (o.choices, o.final_classical, o.accept_probability) for o in poly[w].outcomes
        ]


def test_constant_term_witnessed_on_left_marker():
    P = PolynomialSpec((1, 0, 1))  # image 1, 2, 5, 10, ...
    machine = build_upoly_verifier(P, 1)
    results = run_many(machine, ["0" * l for l in range(12)])
    for w, enum in results.items():
        member = poly_image_member(P.coefficients, len(w))
        assert (max(enum.probabilities) == 1) == member
    path0 = results["0"].outcomes
    assert any(o.choices == (1, 0, 0) and o.accept_probability == 1 for o in path0)


@pytest.mark.parametrize("coeffs", [(0, 0, 1), (0, 1, 1), (2, 0, 0, 1), (0, 1, 0, 2)])
@pytest.mark.parametrize("t", [1, 5])
def test_upoly_per_path_and_decision(coeffs, t):
    P = PolynomialSpec(coeffs)
    machine = build_upoly_verifier(P, t)
    eps = Fraction(1, 2 * t + 1)
    results = run_many(machine, ["0" * l for l in range(60)])
    for w, enum in results.items():
        l = len(w)
        member = poly_image_member(coeffs, l)
        accepting = [o for o in enum.outcomes if o.final_classical == "accept"]
        ones = [o for o in accepting if o.accept_probability == 1]
        if member:
            assert len(ones) == 1
        else:
            assert not ones
        for o in accepting:
            if l == 0:
                continue
            # the forking position identifies i; a fork on the left marker is i = 0
            i = o.choices.index(1) if 1 in o.choices else None
            assert i is not None
            assert o.accept_probability == Fraction(1, 1 + 2 * t * abs(l - P(i)))
        assert decide(enum, eps).decision == (ACCEPT if member else REJECT)


def test_usquare_decision_against_perfect_square():
    machine = build_usquare_verifier(2)
    for w, enum in run_many(machine, ["0" * l for l in range(80)]).items():
        assert (decide(enum, Fraction(1, 5)).decision == ACCEPT) == perfect_square(len(w))
