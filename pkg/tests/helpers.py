"""Hand-written machines and instance generators shared by the test modules."""

import random

from afav.affine import AffineOperator, identity
from afav.machine import LEFT_MARKER, RIGHT_MARKER, MachineSpec, Transition, build_transitions

GOOD = """\
# toy machine
machine toy
classical s1 s2
affine 3
alphabet 0 1 '#'          # quoted so it is not a comment
initial s1 e1
accept-classical s2
accept-affine e1 e3
matrix M1 3x3
1 0 0
0 2 0
0 -1 1
matrix M2 3x3
1 0 0
1/2 1/2 0
-1/2 1/2 1
trans s1 '^' -> s1 M1
trans s1 0 -> s1 M1
trans s1 0 -> s2 M2
trans s1 1 -> s1 M2
trans s1 '#' -> s1 M1
trans s1 '$' -> s2 M1
trans s2 '$' -> s2 M1
"""


def toy_machine(name="toy"):
    """Two-state machine over {x, y} with a nondeterministic choice on x."""
    swap = AffineOperator([[0, 1], [1, 0]], name="S")
    grow = AffineOperator([[2, 1], [-1, 0]], name="G")
    ident = identity(2)
    rows = [
        ("p", LEFT_MARKER, "p", ident),
        ("p", "x", "p", swap),
        ("p", "x", "q", grow),
        ("q", "x", "q", ident),
        ("p", "y", "p", ident),
        ("q", "y", "q", swap),
        ("p", RIGHT_MARKER, "q", ident),
        ("q", RIGHT_MARKER, "q", ident),
    ]
    return MachineSpec(
        name=name,
        classical_states=("p", "q"),
        dim=2,
        alphabet=("x", "y"),
        transitions=build_transitions(rows),
        initial_classical="p",
        initial_affine=0,
        accept_classical="q",
        accept_affine=frozenset({0}),
    )


def random_subsetsum(rng: random.Random, max_blocks=12, bits=10):
    """Random instance text plus its integer target and blocks."""
    k = rng.randint(1, max_blocks)
    target = rng.randrange(2**bits)
    blocks = [rng.randrange(2**bits) for _ in range(k)]
    text = "#".join(format(v, "b") if v else rng.choice(["", "0"]) for v in [target] + blocks)
    return text, target, blocks


def corrupted_machine():
    """A machine whose operator is swapped for a non-affine one after validation."""
    m = toy_machine()
    bad = AffineOperator([[2, 0], [0, 1]])
    table = dict(m.transitions)
    table[("p", "y")] = (Transition("p", bad),)
    object.__setattr__(m, "transitions", table)
    return m


# acceptance results, filled by test_acceptance and printed at the end of the run
ACCEPTANCE = {}
