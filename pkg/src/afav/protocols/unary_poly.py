"""Verifiers for USQUARE = {0^(i^2)} and UPOLY(P) = {0^P(i)}.

The main path counts ``i`` and keeps ``P(i)`` up to date; on reading the
``i``-th symbol it may fork ``path_i``, which freezes ``P(i)`` and keeps
counting the input length ``l`` in ``e2``. At ``$`` the main path rejects
classically and ``path_i`` maps its state to
``(1, t(l - P(i)), t(P(i) - l), 0, ...)``, accepting on ``e1`` with
probability ``1 / (1 + 2t |l - P(i)|)``.

The empty input is decided classically (member iff ``P(0) = 0``). When
``P(0) > 0`` an extra ``path_0`` forks on ``^`` so that ``l = P(0)`` is
witnessed as well.
"""

from __future__ import annotations

from ..affine import AffineOperator, AffineVector, identity
from ..errors import ParameterError
from ..gadgets import PolynomialSpec, polynomial_gadget, square_gadget
from ..machine import LEFT_MARKER, RIGHT_MARKER, MachineSpec, build_transitions

__all__ = ["build_usquare_verifier", "build_upoly_verifier", "check_amplification"]


def check_amplification(t) -> int:
    if isinstance(t, bool) or not isinstance(t, int) or t < 1:
        raise ParameterError(f"amplification parameter t must be a positive integer, got {t!r}")
    return t


def _counter(m: int) -> AffineOperator:
    """``e2 += e1`` with the last entry rebalancing; everything else frozen."""
    rows = [[1 if i == j else 0 for j in range(m)] for i in range(m)]
    rows[1][0] = 1
    rows[m - 1][0] = -1
    return AffineOperator(rows, name="C")


def _collapse(m: int, value_index: int, t: int) -> AffineOperator:
    """``(1, l, ..., v, ..., bal) -> (1, t(l - v), ..., t(v - l), ..., 0)``.

    The first row is all ones (it recovers the constant 1 from the entry
    sum); with the two ``+-t`` rows every column sums to 1.
    """
    rows = [[0] * m for _ in range(m)]
    rows[0] = [1] * m
    rows[1][1], rows[1][value_index] = t, -t
    rows[value_index][1], rows[value_index][value_index] = -t, t
    return AffineOperator(rows, name="F")


def _loader(initial: AffineVector) -> AffineOperator:
    """Maps ``e1`` to ``initial`` and fixes every other basis vector."""
    m = initial.dim
    rows = [[1 if i == j else 0 for j in range(m)] for i in range(m)]
    for i in range(m):
        rows[i][0] = initial[i]
    return AffineOperator(rows, name="L")


def _fork_machine(name, gadget, value_at_zero: int, t: int, metadata: dict) -> MachineSpec:
    m = gadget.initial.dim
    grow = gadget.operator
    count = _counter(m)
    collapse = _collapse(m, gadget.value_index, t)
    ident = identity(m)
    load = _loader(gadget.initial)
    if load.rows == ident.rows:
        load = ident

    rows = [("start", LEFT_MARKER, "start", load)]
    if value_at_zero > 0:
        rows.append(("start", LEFT_MARKER, "fork", load))
    rows += [
        ("start", "0", "main", grow),
        ("start", "0", "fork", grow),
        ("main", "0", "main", grow),
        ("main", "0", "fork", grow),
        ("fork", "0", "fork", count),
        ("start", RIGHT_MARKER, "accept" if value_at_zero == 0 else "reject", ident),
        ("main", RIGHT_MARKER, "reject", ident),
        ("fork", RIGHT_MARKER, "accept", collapse),
    ]
    return MachineSpec(
        name=name,
        classical_states=("start", "main", "fork", "accept", "reject"),
        dim=m,
        alphabet=("0",),
        transitions=build_transitions(rows),
        initial_classical="start",
        initial_affine=0,
        accept_classical="accept",
        accept_affine=frozenset({0}),
        metadata=metadata,
    )


def build_usquare_verifier(t: int = 1) -> MachineSpec:
    """Four affine states ``(1, i, i^2, balance)``; ``l + 1`` paths on ``0^l``."""
    t = check_amplification(t)
    return _fork_machine(f"usquare-t{t}", square_gadget("dim4"), 0, t, {"protocol": "usquare", "t": t})


def build_upoly_verifier(P: PolynomialSpec, t: int = 1) -> MachineSpec:
    """Same skeleton as USQUARE with the ``d + 3`` dimensional polynomial gadget."""
    if not isinstance(P, PolynomialSpec):
        try:
            P = PolynomialSpec(tuple(P))
        except TypeError:
            raise ParameterError(f"expected a PolynomialSpec or coefficient sequence, got {P!r}") from None
    t = check_amplification(t)
    coeffs = ",".join(str(c) for c in P.coefficients)
    return _fork_machine(
        f"upoly-{coeffs.replace(',', '_')}-t{t}",
        polynomial_gadget(P),
        P(0),
        t,
        {"protocol": "upoly", "t": t, "coefficients": P.coefficients},
    )
