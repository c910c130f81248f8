"""Verifier for an arbitrary unary language over ``{a}``.

The membership bits ``b_i`` (``b_i = 1`` iff ``a^i`` is in L) are packed into
``alpha = sum_i b_i / B^(i+1)``. The left marker loads ``(1, alpha, -alpha)``;
on every symbol the prover guesses the next bit ``g`` and the verifier
applies ``A_g``, which maps ``x`` in ``e2`` to ``B x - g``. While guesses are
right, ``e2`` holds the tail value ``alpha[j] <= 1/(B-1)``; a wrong guess
pushes ``|e2|`` to at least ``(B-2)/(B-1)`` and it only grows afterwards.
The classical state records the last guess; ``A_$(k)`` scales ``e2``/``e3``
by ``k`` before weighting.

Languages come either as eventually periodic bit strings (``alpha`` is an
exact rational) or as a membership oracle plus truncation depth ``T``
(``alpha`` is enclosed in an interval of width ``1/((B-1) B^T)``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

import numpy as np

from ..affine import AffineOperator
from ..errors import MachineFormatError, ParameterError
from ..gadgets import PolynomialSpec
from ..machine import LEFT_MARKER, RIGHT_MARKER, MachineSpec, build_transitions
from ..scalars import RationalInterval, parse_scalar

__all__ = [
    "UnaryLanguageSpec",
    "UnaryVerifierConfig",
    "alpha_exact",
    "alpha_interval",
    "build_unary_verifier",
    "completeness_bound",
    "soundness_bound",
    "error_target",
    "default_k",
    "unary_prune_hook",
    "parse_language_spec",
    "load_language_spec",
]

MIN_BASE = 32


def _bits(text) -> tuple:
    bits = tuple(int(b) for b in text)
    if any(b not in (0, 1) for b in bits):
        raise ParameterError(f"bit strings may contain only 0 and 1, got {text!r}")
    return bits


@dataclass(frozen=True)
class UnaryLanguageSpec:
    """A unary language, periodic (exact) or oracle-backed (truncated)."""

    backend: str
    base: int = MIN_BASE
    preperiod: tuple = ()
    period: tuple = ()
    oracle: Optional[Callable[[int], bool]] = field(default=None, compare=False)
    truncation: Optional[int] = None
    label: str = ""

    def __post_init__(self):
        if isinstance(self.base, bool) or not isinstance(self.base, int) or self.base < MIN_BASE:
            raise ParameterError(f"base must be an integer >= {MIN_BASE}, got {self.base!r}")
        if self.backend == "periodic":
            object.__setattr__(self, "preperiod", _bits(self.preperiod))
            object.__setattr__(self, "period", _bits(self.period))
            if not self.period:
                raise ParameterError("periodic languages need a non-empty period")
        elif self.backend == "oracle":
            if self.oracle is None:
                raise ParameterError("oracle backend needs a membership predicate")
            if not isinstance(self.truncation, int) or self.truncation < 1:
                raise ParameterError(f"truncation depth must be a positive integer, got {self.truncation!r}")
        else:
            raise ParameterError(f"unknown backend {self.backend!r}")

    @classmethod
    def periodic_language(cls, preperiod="", period="0", base=MIN_BASE, label=""):
        return cls("periodic", base=base, preperiod=preperiod, period=period, label=label)

    @classmethod
    def oracle_language(cls, predicate, truncation, base=MIN_BASE, label=""):
        return cls("oracle", base=base, oracle=predicate, truncation=truncation, label=label)

    @property
    def is_periodic(self) -> bool:
        return self.backend == "periodic"

    def bit(self, i: int) -> int:
        if self.is_periodic:
            u = len(self.preperiod)
            if i < u:
                return self.preperiod[i]
            return self.period[(i - u) % len(self.period)]
        return 1 if self.oracle(i) else 0

    def contains(self, length: int) -> bool:
        return self.bit(length) == 1

    def as_oracle(self, truncation: int) -> "UnaryLanguageSpec":
        """The same language queried bit by bit (interval backend)."""
        return UnaryLanguageSpec.oracle_language(self.bit, truncation, base=self.base, label=self.label)

    def with_truncation(self, truncation: int) -> "UnaryLanguageSpec":
        if self.is_periodic:
            return self
        return UnaryLanguageSpec.oracle_language(self.oracle, truncation, base=self.base, label=self.label)


def alpha_exact(lang: UnaryLanguageSpec, j: int = 0) -> Fraction:
    """``alpha[j] = sum_i b_{j+i} / B^(i+1)`` summed in closed form."""
    if not lang.is_periodic:
        raise ParameterError("alpha_exact needs a periodic language")
    if j < 0:
        raise ParameterError("index must be non-negative")
    B = lang.base
    u, q = len(lang.preperiod), len(lang.period)
    head = lang.preperiod[j:] if j < u else ()
    r = len(head)
    phase = 0 if j < u else (j - u) % q
    rotated = lang.period[phase:] + lang.period[:phase]
    head_val = Fraction(sum(b * B ** (r - 1 - i) for i, b in enumerate(head)), B**r)
    cycle = sum(b * B ** (q - 1 - i) for i, b in enumerate(rotated))
    return head_val + Fraction(cycle, (B**q - 1) * B**r)


def alpha_interval(lang: UnaryLanguageSpec, j: int = 0, T: Optional[int] = None) -> RationalInterval:
    """Enclosure of ``alpha[j]`` from the bits ``j .. j+T-1``."""
    T = lang.truncation if T is None else T
    if not isinstance(T, int) or T < 1:
        raise ParameterError(f"truncation depth must be a positive integer, got {T!r}")
    B = lang.base
    head = sum(lang.bit(j + i) * B ** (T - 1 - i) for i in range(T))
    lo = Fraction(head, B**T)
    return RationalInterval(lo, lo + Fraction(1, (B - 1) * B**T))


def completeness_bound(k, base: int = MIN_BASE) -> Fraction:
    """Lower bound on the all-correct path: ``1 / (1 + 2k/(B-1))``."""
    k = Fraction(k)
    return 1 / (1 + 2 * k / (base - 1))


def soundness_bound(k, base: int = MIN_BASE) -> Fraction:
    """Upper bound on every non-member path: ``1 / (1 + 2k(B-2)/(B-1))``."""
    k = Fraction(k)
    return 1 / (1 + 2 * k * (base - 2) / (base - 1))


def error_target(base: int = MIN_BASE) -> Fraction:
    """``1 / (1 + sqrt(B-2))`` rounded up to three decimals (0.155 at B=32)."""
    n = base - 2
    c = 1
    # smallest c with c/1000 >= 1/(1+sqrt(n)), i.e. c*sqrt(n) >= 1000 - c
    while not (1000 - c <= 0 or c * c * n >= (1000 - c) ** 2):
        c += 1
    return Fraction(c, 1000)


def _round_sqrt_ratio(numer_sq: Fraction, scale: int) -> int:
    """Nearest integer to ``scale * sqrt(numer_sq)``."""
    q = numer_sq * scale * scale
    f = math.isqrt(q.numerator // q.denominator)
    return f + 1 if (f + Fraction(1, 2)) ** 2 <= q else f


def default_k(base: int = MIN_BASE) -> Fraction:
    """Rational near the optimum ``(B-1) / (2 sqrt(B-2))`` meeting both targets.

    Tries 2, 3, ... decimal digits; at ``B = 32`` this is ``283/100``.
    """
    target = error_target(base)
    k_sq = Fraction((base - 1) ** 2, 4 * (base - 2))
    for digits in range(2, 12):
        scale = 10**digits
        k = Fraction(_round_sqrt_ratio(k_sq, scale), scale)
        if completeness_bound(k, base) >= 1 - target and soundness_bound(k, base) <= target:
            return k
    raise ParameterError(f"no rational k found for base {base}")


@dataclass(frozen=True)
class UnaryVerifierConfig:
    """Language plus end-marker amplification ``k``; bounds checked at construction."""

    language: UnaryLanguageSpec
    k: Optional[Fraction] = None

    def __post_init__(self):
        base = self.language.base
        k = default_k(base) if self.k is None else Fraction(self.k)
        if k <= 0:
            raise ParameterError("k must be positive")
        object.__setattr__(self, "k", k)
        target = self.target
        if completeness_bound(k, base) < 1 - target:
            raise ParameterError(
                f"k={k} fails completeness: 1/(1+2k/(B-1)) = {completeness_bound(k, base)} < {1 - target}"
            )
        if soundness_bound(k, base) > target:
            raise ParameterError(
                f"k={k} fails soundness: 1/(1+2k(B-2)/(B-1)) = {soundness_bound(k, base)} > {target}"
            )

    @property
    def target(self) -> Fraction:
        return error_target(self.language.base)

    @property
    def completeness(self) -> Fraction:
        return completeness_bound(self.k, self.language.base)

    @property
    def soundness(self) -> Fraction:
        return soundness_bound(self.k, self.language.base)


def _guess_operator(base: int, g: int) -> list:
    return [[1, -(base - 1), -(base - 1)], [-g, base, 0], [g, 0, base]]


def _load_then_guess(base: int, g: int, alpha) -> AffineOperator:
    """Exact product ``A_g . L(alpha)`` with ``L(alpha)`` loading ``(1, alpha, -alpha)``.

    The product is affine in ``alpha``: its first column is
    ``(1, B alpha - g, g - B alpha)`` and the rest is ``A_g``. Building it
    entrywise keeps interval enclosures tight (``alpha`` appears once per entry).
    """
    rows = _guess_operator(base, g)
    rows[1][0] = base * alpha - g
    rows[2][0] = g - base * alpha
    return AffineOperator(rows, name=f"L{g}")


def build_unary_verifier(cfg: UnaryVerifierConfig) -> MachineSpec:
    lang = cfg.language
    B = lang.base
    alpha = alpha_exact(lang, 0) if lang.is_periodic else alpha_interval(lang, 0)
    k = cfg.k
    g0 = AffineOperator(_guess_operator(B, 0), name="A0")
    g1 = AffineOperator(_guess_operator(B, 1), name="A1")
    end = AffineOperator([[1, 1 - k, 1 - k], [0, k, 0], [0, 0, k]], name="Aend")
    # choice index = guessed bit; the classical state remembers the last guess
    rows = [
        ("s1", LEFT_MARKER, "s1", _load_then_guess(B, 0, alpha)),
        ("s1", LEFT_MARKER, "s2", _load_then_guess(B, 1, alpha)),
        ("s1", "a", "s1", g0),
        ("s1", "a", "s2", g1),
        ("s2", "a", "s1", g0),
        ("s2", "a", "s2", g1),
        ("s1", RIGHT_MARKER, "s1", end),
        ("s2", RIGHT_MARKER, "s2", end),
    ]
    return MachineSpec(
        name=f"unary-{lang.label or lang.backend}-B{B}",
        classical_states=("s1", "s2"),
        dim=3,
        alphabet=("a",),
        transitions=build_transitions(rows),
        initial_classical="s1",
        initial_affine=0,
        accept_classical="s2",
        accept_affine=frozenset({0}),
        metadata={"protocol": "unary", "base": B, "k": k},
    )


def unary_prune_hook(base: int = MIN_BASE):
    """Pruning hook cutting paths whose ``|e2|`` is certified above ``B/(B-1)``.

    Once ``|e2| > B/(B-1)`` it never shrinks (``|B x - g| >= B|x| - 1``), so
    the path ends below ``1/(1 + 2k B/(B-1))``. That is strictly less than
    the path wrong only on its last guess, which is never cut, so the maximum
    and minimum over all paths are unchanged.
    """

    def hook(view):
        lo, hi = view.lo[:, 1], view.hi[:, 1]
        lower_abs = np.where(lo > 0, lo, np.where(hi < 0, -hi, 0))
        return (base - 1) * lower_abs > base * view.den

    return hook


def _oracle_from_spec(kind: str, args: list, lineno: int):
    if kind == "squares":
        return (lambda n: math.isqrt(n) ** 2 == n), "squares"
    if kind == "poly":
        if len(args) != 1:
            raise MachineFormatError("expected 'oracle poly c0,c1,...'", lineno)
        P = PolynomialSpec.parse(args[0])

        def member(n, P=P):
            i = 0
            while True:
                v = P(i)
                if v == n:
                    return True
                if v > n:
                    return False
                i += 1

        return member, f"poly-{args[0].replace(',', '_')}"
    raise MachineFormatError(f"unknown oracle {kind!r}", lineno)


def parse_language_spec(text: str, truncation: Optional[int] = None) -> UnaryLanguageSpec:
    """Parse a language spec file.

    ``base <B>`` / ``preperiod <bits>`` / ``period <bits>`` for periodic
    languages, or ``oracle squares`` / ``oracle poly <coeffs>`` plus
    ``truncation <T>``. ``truncation`` overrides the file's depth.
    """
    fields: dict = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, *args = line.split()
        if key in fields:
            raise MachineFormatError(f"duplicate {key!r}", lineno)
        if key not in ("base", "preperiod", "period", "oracle", "truncation", "name"):
            raise MachineFormatError(f"unknown directive {key!r}", lineno)
        fields[key] = (args, lineno)

    def integer(key, default=None):
        if key not in fields:
            return default
        args, lineno = fields[key]
        if len(args) != 1:
            raise MachineFormatError(f"{key!r} takes one integer", lineno)
        try:
            return int(parse_scalar(args[0]))
        except ValueError:
            raise MachineFormatError(f"{key!r} takes one integer", lineno) from None

    base = integer("base", MIN_BASE)
    label = fields["name"][0][0] if "name" in fields and fields["name"][0] else ""
    try:
        if "oracle" in fields:
            if "period" in fields or "preperiod" in fields:
                raise MachineFormatError("oracle languages take no period/preperiod")
            args, lineno = fields["oracle"]
            if not args:
                raise MachineFormatError("expected 'oracle squares' or 'oracle poly <coeffs>'", lineno)
            predicate, default_label = _oracle_from_spec(args[0], args[1:], lineno)
            T = truncation if truncation is not None else integer("truncation")
            if T is None:
                raise MachineFormatError("oracle languages need 'truncation <T>' (or --precision)")
            return UnaryLanguageSpec.oracle_language(predicate, T, base=base, label=label or default_label)
        if "period" not in fields:
            raise MachineFormatError("expected 'period <bits>' or 'oracle ...'")

        def bits(key):
            if key not in fields:
                return ""
            args, lineno = fields[key]
            if len(args) > 1:
                raise MachineFormatError(f"{key!r} takes one bit string", lineno)
            return args[0] if args else ""

        return UnaryLanguageSpec.periodic_language(bits("preperiod"), bits("period"), base=base, label=label)
    except ParameterError as exc:
        raise MachineFormatError(str(exc)) from None


def load_language_spec(path, truncation: Optional[int] = None) -> UnaryLanguageSpec:
    with open(path, encoding="utf-8") as fh:
        return parse_language_spec(fh.read(), truncation=truncation)
