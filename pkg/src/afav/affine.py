"""Affine vectors, affine operators and the l1 weighting operator.

An affine vector has entries summing to 1 (entries may be negative); an
affine operator is a square matrix whose columns each sum to 1, so it maps
affine vectors to affine vectors. Entries are exact rationals or
:class:`~afav.scalars.RationalInterval` enclosures; in interval mode the
sum conditions are relaxed to "the interval sum contains 1".

Indices in this Python API are 0-based; the machine text format names
affine states ``e1 .. em``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import StructuralError
from .scalars import RationalInterval, Scalar, as_rational, is_interval

__all__ = [
    "AffineVector",
    "AffineOperator",
    "identity",
    "basis_vector",
    "validate_operator",
    "apply",
    "weight",
    "tensor",
    "tensor_vectors",
]


def _coerce_entry(x):
    if isinstance(x, RationalInterval):
        return x
    return as_rational(x)


def _sum_is_one(total) -> bool:
    if isinstance(total, RationalInterval):
        return total.contains(1)
    return total == 1


def _total(values):
    total = Fraction(0)
    for v in values:
        total = total + v
    return total


@dataclass(frozen=True)
class AffineVector:
    """Immutable affine state; construction checks the entry-sum-1 invariant."""

    entries: tuple

    def __init__(self, entries: Iterable[Scalar], *, check: bool = True):
        entries = tuple(_coerce_entry(x) for x in entries)
        if not entries:
            raise StructuralError("affine vector must have at least one entry")
        object.__setattr__(self, "entries", entries)
        if check and not _sum_is_one(self.entry_sum()):
            raise StructuralError(f"entries sum to {self.entry_sum()}, not 1")

    def __len__(self):
        return len(self.entries)

    def __getitem__(self, i):
        return self.entries[i]

    def __iter__(self):
        return iter(self.entries)

    @property
    def dim(self) -> int:
        return len(self.entries)

    def is_interval(self) -> bool:
        return any(is_interval(x) for x in self.entries)

    def entry_sum(self):
        return _total(self.entries)

    def l1_norm(self):
        return _total(abs(x) for x in self.entries)

    def __repr__(self):
        return f"AffineVector({[str(x) for x in self.entries]})"


@dataclass(frozen=True)
class AffineOperator:
    """Square matrix of scalars, row-major.

    Construction does not enforce the column-sum-1 property so that invalid
    matrices can be represented and rejected by :func:`validate_operator`;
    every operator placed in a machine is validated there.
    """

    rows: tuple
    name: str | None = field(default=None, compare=False)

    def __init__(self, rows: Iterable[Iterable[Scalar]], name: str | None = None):
        rows = tuple(tuple(_coerce_entry(x) for x in row) for row in rows)
        m = len(rows)
        if m == 0 or any(len(r) != m for r in rows):
            raise StructuralError("affine operator must be a non-empty square matrix")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "name", name)

    @property
    def dim(self) -> int:
        return len(self.rows)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def column_sums(self) -> list:
        m = self.dim
        return [_total(self.rows[i][j] for i in range(m)) for j in range(m)]

    def is_interval(self) -> bool:
        return any(is_interval(x) for row in self.rows for x in row)

    def is_integer(self) -> bool:
        return all(
            not is_interval(x) and x.denominator == 1 for row in self.rows for x in row
        )

    def named(self, name: str) -> "AffineOperator":
        return AffineOperator(self.rows, name=name)

    def __matmul__(self, other: "AffineOperator") -> "AffineOperator":
        """Exact product ``self · other`` (apply ``other`` first)."""
        if not isinstance(other, AffineOperator):
            return NotImplemented
        if other.dim != self.dim:
            raise StructuralError(f"cannot compose {self.dim}x{self.dim} with {other.dim}x{other.dim}")
        m = self.dim
        return AffineOperator(
            [
                [_total(self.rows[i][r] * other.rows[r][j] for r in range(m)) for j in range(m)]
                for i in range(m)
            ]
        )

    def __repr__(self):
        label = f"{self.name}: " if self.name else ""
        return f"AffineOperator({label}{[[str(x) for x in r] for r in self.rows]})"


def identity(m: int) -> AffineOperator:
    return AffineOperator([[1 if i == j else 0 for j in range(m)] for i in range(m)], name="I")


def basis_vector(m: int, i: int) -> AffineVector:
    """The standard basis vector ``e_{i+1}`` of dimension ``m``."""
    if not 0 <= i < m:
        raise StructuralError(f"basis index {i} out of range for dimension {m}")
    return AffineVector([1 if j == i else 0 for j in range(m)])


def validate_operator(A: AffineOperator) -> bool:
    """True iff every column of ``A`` sums to 1 (contains 1 in interval mode)."""
    return all(_sum_is_one(s) for s in A.column_sums())


def apply(A: AffineOperator, v: AffineVector) -> AffineVector:
    """Exact matrix-vector product ``A · v``."""
    if A.dim != v.dim:
        raise StructuralError(f"operator dimension {A.dim} does not match vector dimension {v.dim}")
    m = A.dim
    return AffineVector(
        [_total(A.rows[i][j] * v.entries[j] for j in range(m)) for i in range(m)],
        check=False,
    )


def weight(v: AffineVector, accepting: Iterable[int]):
    """Probability of observing an accepting state when ``v`` is weighted.

    Returns ``sum(|v[i]| for i in accepting) / |v|``. For intervals the ratio
    ``a / (a + r)`` is increasing in the accepting mass ``a`` and decreasing
    in the rest ``r``, which gives a tight enclosure.
    """
    accepting = set(accepting)
    if any(not 0 <= i < v.dim for i in accepting):
        raise StructuralError(f"accepting indices {sorted(accepting)} out of range for dimension {v.dim}")
    acc = _total(abs(v.entries[i]) for i in range(v.dim) if i in accepting)
    rest = _total(abs(v.entries[i]) for i in range(v.dim) if i not in accepting)
    if not (is_interval(acc) or is_interval(rest)):
        return acc / (acc + rest)
    acc = acc if is_interval(acc) else RationalInterval(acc)
    rest = rest if is_interval(rest) else RationalInterval(rest)
    return ratio_enclosure(acc.lo, acc.hi, rest.lo, rest.hi)


def ratio_enclosure(acc_lo, acc_hi, rest_lo, rest_hi) -> RationalInterval:
    """Enclosure of ``a / (a + r)`` for ``a`` in [acc_lo, acc_hi], ``r`` in [rest_lo, rest_hi]."""
    den_lo = acc_lo + rest_hi
    den_hi = acc_hi + rest_lo
    lo = Fraction(acc_lo) / den_lo if den_lo > 0 else Fraction(0)
    hi = Fraction(acc_hi) / den_hi if den_hi > 0 else Fraction(1)
    return RationalInterval(max(lo, Fraction(0)), min(hi, Fraction(1)))


def tensor(A: AffineOperator, B: AffineOperator) -> AffineOperator:
    """Kronecker product; column sums multiply, so validity is preserved."""
    n, m = A.dim, B.dim
    return AffineOperator(
        [
            [A.rows[i // m][j // m] * B.rows[i % m][j % m] for j in range(n * m)]
            for i in range(n * m)
        ]
    )


def tensor_vectors(u: AffineVector, v: AffineVector) -> AffineVector:
    return AffineVector([a * b for a in u.entries for b in v.entries])


def matrix_of(rows: Sequence[Sequence[Scalar]], name: str | None = None) -> AffineOperator:
    """Shorthand constructor used by the gadget and protocol builders."""
    return AffineOperator(rows, name=name)
