from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from afav.affine import (
    AffineOperator,
    AffineVector,
    apply,
    basis_vector,
    identity,
    tensor,
    tensor_vectors,
    validate_operator,
    weight,
)
from afav.errors import StructuralError
from afav.scalars import RationalInterval

small = st.fractions(min_value=-20, max_value=20, max_denominator=12)


@st.composite
def affine_vectors(draw, m=None):
    m = m or draw(st.integers(1, 5))
    head = [draw(small) for _ in range(m - 1)]
    return AffineVector(head + [1 - sum(head, Fraction(0))])


@st.composite
def affine_operators(draw, m):
    cols = [draw(affine_vectors(m)).entries for _ in range(m)]
    return AffineOperator([[cols[j][i] for j in range(m)] for i in range(m)])


@st.composite
def operator_and_vector(draw):
    m = draw(st.integers(1, 5))
    return draw(affine_operators(m)), draw(affine_vectors(m))


A0 = AffineOperator([[1, 0, 0], [0, 2, 0], [0, -1, 1]])
A1 = AffineOperator([[1, 0, 0], [1, 2, 0], [-1, -1, 1]])


def test_validate_operator_examples():
    assert validate_operator(identity(3))
    assert validate_operator(A0)
    assert not validate_operator(AffineOperator([[1, 1], [0, 1]]))


def test_apply_examples():
    v = apply(A1, basis_vector(3, 0))
    assert v.entries == (1, 1, -1)
    assert apply(A1, v).entries == (1, 3, -3)
    assert apply(identity(3), v) == v


def test_apply_dimension_mismatch():
    with pytest.raises(StructuralError):
        apply(identity(2), basis_vector(3, 0))


def test_vector_must_sum_to_one():
    with pytest.raises(StructuralError):
        AffineVector([1, 1])
    with pytest.raises(StructuralError):
        AffineVector([])
    assert AffineVector([RationalInterval(0, 1), RationalInterval(0, 1)]).is_interval()


def test_operator_must_be_square():
    with pytest.raises(StructuralError):
        AffineOperator([[1, 0]])


def test_weight_examples():
    assert weight(AffineVector([1, 2, -2]), {0}) == Fraction(1, 5)
    assert weight(AffineVector([1, 0, 0, 0]), {0}) == 1
    t = 3
    assert weight(AffineVector([1, t, 0, -t]), {0}) == Fraction(1, 2 * t + 1)


def test_weight_rejects_bad_index():
    with pytest.raises(StructuralError):
        weight(AffineVector([1, 0]), {2})


def test_weight_interval_enclosure():
    v = AffineVector([RationalInterval(Fraction(9, 10), Fraction(11, 10)), RationalInterval(Fraction(-1, 10), Fraction(1, 10))])
    p = weight(v, {0})
    assert isinstance(p, RationalInterval)
    for a in (Fraction(9, 10), 1, Fraction(11, 10)):
        for b in (Fraction(-1, 10), 0, Fraction(1, 10)):
            assert p.contains(Fraction(abs(a)) / (abs(a) + abs(b)))


def test_tensor_examples():
    B = AffineOperator([[0, -1], [1, 2]])
    BB = tensor(B, B)
    assert validate_operator(BB)
    assert all(s == 1 for s in BB.column_sums())
    v = tensor_vectors(basis_vector(2, 0), basis_vector(2, 0))
    v = apply(BB, apply(BB, v))
    assert v.entries == (1, -2, -2, 4)
    assert tensor(identity(2), identity(2)).rows == identity(4).rows


def test_composition_matches_sequential_application():
    v = basis_vector(3, 0)
    assert apply(A1 @ A0, v) == apply(A1, apply(A0, v))


@given(operator_and_vector())
def test_apply_preserves_entry_sum(pair):
    A, v = pair
    assert validate_operator(A)
    out = apply(A, v)
    assert out.entry_sum() == 1
    assert out.l1_norm() >= 1


@given(affine_vectors())
def test_weight_over_all_states_is_one(v):
    assert weight(v, range(v.dim)) == 1
    assert 0 <= weight(v, {0}) <= 1


@settings(max_examples=50)
@given(operator_and_vector(), st.fractions(min_value=0, max_value=1, max_denominator=20))
def test_interval_mode_contains_point_result(pair, radius):
    A, v = pair
    widened = AffineVector([RationalInterval(x - radius, x + radius) for x in v.entries])
    wide_out = apply(A, widened)
    exact_out = apply(A, v)
    assert all(w.contains(x) for w, x in zip(wide_out.entries, exact_out.entries))
    assert weight(widened, {0}).contains(weight(v, {0}))
