"""Bounded-error decision over the paths of a run."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .engine import Enumeration, PathOutcome, enumerate_paths
from .errors import ParameterError
from .machine import MachineSpec
from .scalars import RationalInterval, as_rational

__all__ = [
    "ACCEPT",
    "REJECT",
    "INCONCLUSIVE",
    "VerificationResult",
    "decide",
    "verify",
    "check_epsilon",
    "dead_state_prune_hook",
]

ACCEPT = "accept"
REJECT = "reject"
INCONCLUSIVE = "inconclusive"


def check_epsilon(epsilon) -> Fraction:
    try:
        epsilon = as_rational(epsilon)
    except TypeError:
        raise ParameterError(f"epsilon must be an exact rational, got {epsilon!r}") from None
    if not 0 <= epsilon < Fraction(1, 2):
        raise ParameterError(f"epsilon must lie in [0, 1/2), got {epsilon}")
    return epsilon


def _bounds(p):
    if isinstance(p, RationalInterval):
        return p.lo, p.hi
    p = as_rational(p)
    return p, p


@dataclass(frozen=True)
class VerificationResult:
    outcomes: tuple
    max_probability: object
    min_probability: object
    decision: str
    epsilon: Fraction

    @property
    def accepted(self) -> bool:
        return self.decision == ACCEPT


def _extreme(values, pick_max: bool):
    """Max (or min) of exact values, or the hull of the per-endpoint extremes."""
    if not any(isinstance(v, RationalInterval) for v in values):
        return max(values) if pick_max else min(values)
    bounds = [_bounds(v) for v in values]
    f = max if pick_max else min
    lo, hi = f(b[0] for b in bounds), f(b[1] for b in bounds)
    return RationalInterval(lo, hi)


def decide(outcomes, epsilon) -> VerificationResult:
    """Accept iff some path reaches ``1 - eps``; reject iff every path is ``<= eps``.

    ``outcomes`` is an :class:`Enumeration` or a sequence of
    :class:`PathOutcome` / bare probabilities. With interval probabilities a
    threshold that cannot be settled gives ``inconclusive``; exact runs whose
    maximum falls strictly between ``eps`` and ``1 - eps`` (a machine outside
    its bounded-error promise) are reported the same way.
    """
    epsilon = check_epsilon(epsilon)
    pruned, floor = 0, None
    if isinstance(outcomes, Enumeration):
        pruned, floor = outcomes.pruned, outcomes.pruned_floor
        outcomes = outcomes.outcomes
    outcomes = tuple(outcomes)
    if not outcomes:
        if pruned:
            # every path was cut as certified harmless
            return VerificationResult((), Fraction(0), Fraction(0), REJECT, epsilon)
        raise ParameterError("cannot decide over an empty set of paths")
    probs = [o.accept_probability if isinstance(o, PathOutcome) else o for o in outcomes]
    if floor is not None:
        probs.append(floor)
    top = _extreme(probs, True)
    bottom = _extreme(probs, False)
    top_lo, top_hi = _bounds(top)
    if top_lo >= 1 - epsilon:
        decision = ACCEPT
    elif top_hi <= epsilon:
        decision = REJECT
    else:
        decision = INCONCLUSIVE
    return VerificationResult(outcomes, top, bottom, decision, epsilon)


def verify(machine: MachineSpec, word: str, epsilon, **options) -> VerificationResult:
    """``decide(enumerate_paths(machine, word, **options), epsilon)``."""
    return decide(enumerate_paths(machine, word, **options), epsilon)


def dead_state_prune_hook(machine: MachineSpec):
    """Cut configurations whose classical state can no longer reach ``s_a``.

    Such paths end with probability 0 whatever is read next, so every path
    with positive probability survives and the maximum is unchanged. Works
    for any machine, unlike the protocol-specific hooks.
    """
    alive = {machine.accept_classical}
    changed = True
    while changed:
        changed = False
        for (src, _sym), choices in machine.transitions.items():
            if src not in alive and any(tr.target in alive for tr in choices):
                alive.add(src)
                changed = True

    def hook(view):
        return np.array([s not in alive for s in view.states], dtype=bool)

    hook.pruned_probability = Fraction(0)
    return hook
