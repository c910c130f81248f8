"""Verifier for SUBSETSUM over inputs ``S#B1#...#Bk`` (binary numbers).

Classical control: ``read_s`` while reading ``S``; at every ``#`` the next
block is either skipped (choice 0) or picked (choice 1), so a path's
choice string is the pick mask of the blocks. ``S`` is encoded into ``e2``,
a picked block into ``e3``; the delimiter closing a picked block applies
``D``, which subtracts ``e3`` from ``e2`` and clears ``e3``. ``E(t)`` at ``$``
scales the residue so a path picking ``I`` accepts with probability
``1 / (1 + 2t |S - S_I|)``.
"""

from fractions import Fraction

from ..affine import AffineOperator, identity
from ..machine import LEFT_MARKER, RIGHT_MARKER, MachineSpec, build_transitions
from .unary_poly import check_amplification

__all__ = ["build_subsetsum_verifier", "subsetsum_path_probability"]


def _operators(t: int) -> dict:
    ops = {
        "I": identity(4),
        "A0": [[1, 0, 0, 0], [0, 2, 0, 0], [0, 0, 1, 0], [0, -1, 0, 1]],
        "A1": [[1, 0, 0, 0], [1, 2, 0, 0], [0, 0, 1, 0], [-1, -1, 0, 1]],
        "P0": [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 2, 0], [0, 0, -1, 1]],
        "P1": [[1, 0, 0, 0], [0, 1, 0, 0], [1, 0, 2, 0], [-1, 0, -1, 1]],
        "D": [[1, 0, 0, 0], [0, 1, -1, 0], [0, 0, 0, 0], [0, 0, 2, 1]],
        "E": [[1, 0, 0, 0], [0, t, 0, 0], [0, 1 - t, 1, 1 - t], [0, 0, 0, t]],
    }
    ops = {name: op if isinstance(op, AffineOperator) else AffineOperator(op, name=name) for name, op in ops.items()}
    ops["ED"] = (ops["E"] @ ops["D"]).named("ED")
    return ops


def build_subsetsum_verifier(t: int = 1) -> MachineSpec:
    t = check_amplification(t)
    op = _operators(t)
    rows = [
        ("read_s", LEFT_MARKER, "read_s", op["I"]),
        ("read_s", "0", "read_s", op["A0"]),
        ("read_s", "1", "read_s", op["A1"]),
        ("read_s", "#", "skip", op["I"]),
        ("read_s", "#", "pick", op["I"]),
        # no '#' seen: reject deterministically
        ("read_s", RIGHT_MARKER, "reject", op["I"]),
        ("skip", "0", "skip", op["I"]),
        ("skip", "1", "skip", op["I"]),
        ("skip", "#", "skip", op["I"]),
        ("skip", "#", "pick", op["I"]),
        ("skip", RIGHT_MARKER, "accept", op["E"]),
        ("pick", "0", "pick", op["P0"]),
        ("pick", "1", "pick", op["P1"]),
        ("pick", "#", "skip", op["D"]),
        ("pick", "#", "pick", op["D"]),
        ("pick", RIGHT_MARKER, "accept", op["ED"]),
    ]
    return MachineSpec(
        name=f"subsetsum-t{t}",
        classical_states=("read_s", "skip", "pick", "accept", "reject"),
        dim=4,
        alphabet=("0", "1", "#"),
        transitions=build_transitions(rows),
        initial_classical="read_s",
        initial_affine=0,
        accept_classical="accept",
        accept_affine=frozenset({0}),
        metadata={"protocol": "subsetsum", "t": t},
    )


def subsetsum_path_probability(target: int, picked_sum: int, t: int) -> Fraction:
    """Closed-form acceptance probability of the path picking a subset summing to ``picked_sum``."""
    return Fraction(1, 1 + 2 * t * abs(target - picked_sum))
