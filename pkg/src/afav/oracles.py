"""Brute-force reference answers used to cross-check the verifiers.

Nothing here touches the affine arithmetic or the path engine: subset sums
are plain integer sets, and :func:`naive_enumerate` walks the computation
tree recursively with its own list-of-Fractions matrix product.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import InputError, ResourceError

__all__ = [
    "SubsetSumInstance",
    "subsetsum_membership",
    "subsetsum_min_gap",
    "subset_sums",
    "perfect_square",
    "poly_image_member",
    "poly_min_gap",
    "naive_enumerate",
    "NaivePath",
]

MAX_GAP_BLOCKS = 24


@dataclass(frozen=True)
class SubsetSumInstance:
    target: int
    blocks: tuple
    text: str

    @classmethod
    def parse(cls, text: str) -> "SubsetSumInstance":
        if any(ch not in "01#" for ch in text):
            raise InputError(f"subset-sum instances are strings over 0, 1, #: {text!r}")
        if "#" not in text:
            raise InputError(f"subset-sum instance needs at least one '#': {text!r}")
        parts = text.split("#")
        values = [int(p, 2) if p else 0 for p in parts]
        return cls(values[0], tuple(values[1:]), text)

    @classmethod
    def from_values(cls, target: int, blocks) -> "SubsetSumInstance":
        text = "#".join(format(v, "b") if v else "" for v in (target, *blocks))
        return cls(target, tuple(blocks), text)


def _instance(inst) -> SubsetSumInstance:
    return inst if isinstance(inst, SubsetSumInstance) else SubsetSumInstance.parse(inst)


def subsetsum_membership(inst) -> bool:
    """Dynamic programming over reachable sums capped at the target."""
    inst = _instance(inst)
    reachable = {0}
    for b in inst.blocks:
        reachable |= {s + b for s in reachable if s + b <= inst.target}
    return inst.target in reachable


def subset_sums(blocks) -> dict:
    """Map each achievable sum to how many subsets reach it (all 2^k subsets)."""
    counts = {0: 1}
    for b in blocks:
        nxt = dict(counts)
        for s, c in counts.items():
            nxt[s + b] = nxt.get(s + b, 0) + c
        counts = nxt
    return counts


def subsetsum_min_gap(inst) -> int:
    """``min over subsets I of |S - S_I|``; zero exactly for members."""
    inst = _instance(inst)
    if len(inst.blocks) > MAX_GAP_BLOCKS:
        raise ResourceError(f"{len(inst.blocks)} blocks exceed the brute-force limit of {MAX_GAP_BLOCKS}")
    return min(abs(inst.target - s) for s in subset_sums(inst.blocks))


def perfect_square(n: int) -> bool:
    if n < 0:
        return False
    r = math.isqrt(n)
    return r * r == n


def _poly(coeffs, x):
    acc = 0
    for c in reversed(tuple(coeffs)):
        acc = acc * x + c
    return acc


def _coeffs(P):
    return tuple(getattr(P, "coefficients", P))


def poly_image_member(P, n: int) -> bool:
    """Is ``n = P(i)`` for some natural ``i``? ``P`` is increasing, so stop once ``P(i) > n``."""
    coeffs = _coeffs(P)
    i = 0
    while True:
        v = _poly(coeffs, i)
        if v == n:
            return True
        if v > n:
            return False
        i += 1


def poly_min_gap(P, n: int, candidates=None) -> int:
    """``min over i in candidates of |n - P(i)|`` (default ``i = 1..n``)."""
    coeffs = _coeffs(P)
    if candidates is None:
        candidates = range(1, n + 1)
    return min(abs(n - _poly(coeffs, i)) for i in candidates)


@dataclass(frozen=True)
class NaivePath:
    choices: tuple
    final_classical: str
    vector: tuple
    accept_probability: Fraction


def _matvec(rows, vec):
    return tuple(sum((Fraction(a) * b for a, b in zip(row, vec)), Fraction(0)) for row in rows)


def naive_enumerate(machine, word: str, budget: int = 2**16) -> list:
    """Every path of ``machine`` on ``^ word $`` by depth-first recursion, no merging."""
    for ch in word:
        if ch not in machine.alphabet:
            raise InputError(f"symbol {ch!r} not in alphabet")
    tape = "^" + word + "$"
    m = machine.dim
    start = tuple(Fraction(1 if i == machine.initial_affine else 0) for i in range(m))
    out = []

    def walk(pos, state, vec, choices):
        if pos == len(tape):
            if len(out) >= budget:
                raise ResourceError(f"naive enumeration exceeded {budget} paths", step=pos)
            if state != machine.accept_classical:
                p = Fraction(0)
            else:
                acc = sum(abs(vec[i]) for i in machine.accept_affine)
                p = acc / sum(abs(x) for x in vec)
            out.append(NaivePath(choices, state, vec, p))
            return
        for idx, tr in enumerate(machine.transitions[(state, tape[pos])]):
            rows = tr.operator.rows
            if any(not isinstance(x, (int, Fraction)) for row in rows for x in row):
                raise TypeError("naive_enumerate handles rational machines only")
            walk(pos + 1, tr.target, _matvec(rows, vec), choices + (idx,))

    walk(0, machine.initial_classical, start, ())
    return out
