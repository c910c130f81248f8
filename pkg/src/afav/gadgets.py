"""Integer-valued encodings of numbers into affine states.

Each constructor returns an initial vector and operator(s) whose repeated
application keeps a designated entry equal to a known quantity: the binary
value of the symbols read, the number of symbols read, its square, or a
polynomial of it.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Sequence

from .affine import AffineOperator, AffineVector, apply, basis_vector, tensor, tensor_vectors
from .errors import ParameterError

__all__ = [
    "Gadget",
    "PolynomialSpec",
    "binary_encoding",
    "encode_binary",
    "counting_method1",
    "counting_method2",
    "square_gadget",
    "SQUARE_VARIANTS",
    "polynomial_gadget",
    "pascal_rows",
    "trajectory",
]


class Gadget(NamedTuple):
    initial: AffineVector
    operator: AffineOperator
    value_index: int


@dataclass(frozen=True)
class PolynomialSpec:
    """``P(x) = c0 + c1 x + ... + cd x^d`` with non-negative integer coefficients.

    Must be non-linear: some ``cj`` with ``j >= 2`` is non-zero. Trailing
    zero coefficients are dropped.
    """

    coefficients: tuple

    def __post_init__(self):
        coeffs = list(self.coefficients)
        for c in coeffs:
            if isinstance(c, bool) or not isinstance(c, int):
                raise ParameterError(f"coefficients must be integers, got {c!r}")
            if c < 0:
                raise ParameterError(f"coefficients must be non-negative, got {c}")
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        if len(coeffs) < 3:
            raise ParameterError("polynomial must be non-linear (degree >= 2)")
        object.__setattr__(self, "coefficients", tuple(coeffs))

    @classmethod
    def parse(cls, text: str) -> "PolynomialSpec":
        """From ``"c0,c1,...,cd"``."""
        try:
            return cls(tuple(int(tok) for tok in text.replace(" ", "").split(",") if tok != ""))
        except ValueError:
            raise ParameterError(f"invalid coefficient list {text!r}") from None

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def __call__(self, x: int) -> int:
        acc = 0
        for c in reversed(self.coefficients):
            acc = acc * x + c
        return acc

    def __str__(self):
        terms = []
        for j, c in enumerate(self.coefficients):
            if c:
                power = "" if j == 0 else "x" if j == 1 else f"x^{j}"
                terms.append(f"{c}" if j == 0 else power if c == 1 else f"{c}{power}")
        return " + ".join(reversed(terms))


def binary_encoding() -> tuple:
    """``(1,0,0)`` and ``A0``/``A1``: reading ``w`` gives ``(1, val(w), -val(w))``."""
    a0 = AffineOperator([[1, 0, 0], [0, 2, 0], [0, -1, 1]], name="A0")
    a1 = AffineOperator([[1, 0, 0], [1, 2, 0], [-1, -1, 1]], name="A1")
    return basis_vector(3, 0), a0, a1


def encode_binary(word: str) -> AffineVector:
    v, a0, a1 = binary_encoding()
    for ch in word:
        if ch not in "01":
            raise ParameterError(f"binary encoding reads only 0/1, got {ch!r}")
        v = apply(a1 if ch == "1" else a0, v)
    return v


def counting_method1() -> Gadget:
    """``(1, l, -l)`` after ``l`` steps."""
    op = AffineOperator([[1, 0, 0], [1, 1, 0], [-1, 0, 1]], name="C")
    return Gadget(basis_vector(3, 0), op, 1)


def counting_method2() -> Gadget:
    """``(1 - l, l)`` after ``l`` steps."""
    op = AffineOperator([[0, -1], [1, 2]], name="B")
    return Gadget(basis_vector(2, 0), op, 1)


SQUARE_VARIANTS = ("dim4", "dim4x2", "dim3", "tensor")


def square_gadget(variant: str = "dim4") -> Gadget:
    """Encodings of ``l^2``.

    ``dim4``   -> ``(1, l, l^2, -l - l^2)``
    ``dim4x2`` -> ``(1, 2l, l^2, -2l - l^2)``
    ``dim3``   -> ``(1 - l - l^2, l, l^2)``
    ``tensor`` -> ``(1-l, l) (x) (1-l, l)``, square in the last entry
    """
    if variant == "dim4":
        op = [[1, 0, 0, 0], [1, 1, 0, 0], [1, 2, 1, 0], [-2, -2, 0, 1]]
        return Gadget(basis_vector(4, 0), AffineOperator(op, name="Q"), 2)
    if variant == "dim4x2":
        op = [[1, 0, 0, 0], [2, 1, 0, 0], [1, 1, 1, 0], [-3, -1, 0, 1]]
        return Gadget(basis_vector(4, 0), AffineOperator(op, name="Q"), 2)
    if variant == "dim3":
        op = [[-1, -4, -2], [1, 2, 1], [1, 3, 2]]
        return Gadget(basis_vector(3, 0), AffineOperator(op, name="Q"), 2)
    if variant == "tensor":
        count = counting_method2()
        op = tensor(count.operator, count.operator).named("BB")
        return Gadget(tensor_vectors(count.initial, count.initial), op, 3)
    raise ParameterError(f"unknown square variant {variant!r}; expected one of {SQUARE_VARIANTS}")


def pascal_rows(d: int) -> list:
    """Rows 0..d of Pascal's triangle via the additive recurrence."""
    rows = [[1]]
    for n in range(1, d + 1):
        prev = rows[-1]
        rows.append([1] + [prev[k - 1] + prev[k] for k in range(1, n)] + [1])
    return rows


def _balanced(rows: list) -> AffineOperator:
    """Append a last row that makes every column sum to 1."""
    m = len(rows) + 1
    last = [1 - sum(r[j] for r in rows) for j in range(m)]
    return AffineOperator(rows + [last])


def polynomial_gadget(P: PolynomialSpec) -> Gadget:
    """State ``(1, l, ..., l^d, P(l), balance)`` after ``l`` steps.

    The operator is the exact product of a binomial update of the powers
    (``(i+1)^j`` from ``1, i, ..., i^j``) and a combination step writing
    ``P(i+1)`` from the updated powers. ``value_index`` is ``d + 1``.
    """
    if not isinstance(P, PolynomialSpec):
        raise ParameterError("polynomial_gadget expects a PolynomialSpec")
    d = P.degree
    m = d + 3
    binom = pascal_rows(d)
    powers = [[binom[j][k] if k <= j else 0 for k in range(m)] for j in range(d + 1)]
    shift = _balanced(powers + [[1 if k == d + 1 else 0 for k in range(m)]])
    keep = [[1 if k == j else 0 for k in range(m)] for j in range(d + 1)]
    combine = _balanced(keep + [list(P.coefficients) + [0, 0]])
    op = (combine @ shift).named("G")
    p0 = P(0)
    initial = AffineVector([1] + [0] * d + [p0, -p0])
    return Gadget(initial, op, d + 1)


def trajectory(initial: AffineVector, operator: AffineOperator, steps: int) -> list:
    """``[v_0, v_1, ..., v_steps]``."""
    out = [initial]
    for _ in range(steps):
        out.append(apply(operator, out[-1]))
    return out


def apply_word(initial: AffineVector, ops: dict, word: Sequence[str]) -> AffineVector:
    v = initial
    for ch in word:
        v = apply(ops[ch], v)
    return v
