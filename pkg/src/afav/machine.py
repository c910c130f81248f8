"""Finite automata with nondeterministic classical and affine states (ANfA).

A machine reads ``^ w $`` left to right. On each symbol every live path
replaces its classical state and multiplies its affine vector by the
operator of each applicable transition; several transitions for the same
``(state, symbol)`` pair fork the path. Weighting happens once, after ``$``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .affine import AffineOperator, AffineVector, apply, basis_vector, validate_operator
from .errors import ConfigurationError, InputError, StructuralError

LEFT_MARKER = "^"
RIGHT_MARKER = "$"
MARKERS = (LEFT_MARKER, RIGHT_MARKER)

__all__ = [
    "LEFT_MARKER",
    "RIGHT_MARKER",
    "MARKERS",
    "Transition",
    "MachineSpec",
    "Configuration",
    "initial_configuration",
    "step",
    "tape",
]


@dataclass(frozen=True)
class Transition:
    target: str
    operator: AffineOperator


@dataclass(frozen=True, eq=False)
class MachineSpec:
    """The 8-tuple ``(S, E, Sigma, delta, s_I, e_I, s_a, E_a)``.

    ``transitions`` maps ``(state, symbol)`` to the ordered tuple of choices;
    the position of a transition in that tuple is its choice index. Affine
    indices (``initial_affine``, ``accept_affine``) are 0-based.
    """

    name: str
    classical_states: tuple
    dim: int
    alphabet: tuple
    transitions: Mapping
    initial_classical: str
    initial_affine: int
    accept_classical: str
    accept_affine: frozenset
    metadata: Mapping = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "classical_states", tuple(self.classical_states))
        object.__setattr__(self, "alphabet", tuple(self.alphabet))
        object.__setattr__(self, "accept_affine", frozenset(self.accept_affine))
        object.__setattr__(
            self,
            "transitions",
            {key: tuple(choices) for key, choices in self.transitions.items()},
        )
        self._validate()

    def _validate(self):
        states = set(self.classical_states)
        if len(states) != len(self.classical_states):
            raise StructuralError("duplicate classical state names")
        if self.dim < 1:
            raise StructuralError("affine dimension must be at least 1")
        for sym in self.alphabet:
            if sym in MARKERS:
                raise StructuralError(f"alphabet may not contain the reserved marker {sym!r}")
            if len(sym) != 1 or not sym.isprintable() or sym.isspace():
                raise StructuralError(f"alphabet symbols must be single printable characters, got {sym!r}")
        for s in (self.initial_classical, self.accept_classical):
            if s not in states:
                raise StructuralError(f"unknown classical state {s!r}")
        if not 0 <= self.initial_affine < self.dim:
            raise StructuralError(f"initial affine index {self.initial_affine} out of range")
        if any(not 0 <= i < self.dim for i in self.accept_affine):
            raise StructuralError("accepting affine index out of range")
        symbols = set(self.alphabet) | set(MARKERS)
        for (state, sym), choices in self.transitions.items():
            if state not in states:
                raise StructuralError(f"transition from unknown state {state!r}")
            if sym not in symbols:
                raise StructuralError(f"transition on unknown symbol {sym!r}")
            if not choices:
                raise StructuralError(f"empty transition set for ({state!r}, {sym!r})")
            for tr in choices:
                if tr.target not in states:
                    raise StructuralError(f"transition to unknown state {tr.target!r}")
                if tr.operator.dim != self.dim:
                    raise StructuralError(
                        f"operator on ({state!r}, {sym!r}) has dimension {tr.operator.dim}, expected {self.dim}"
                    )
                if not validate_operator(tr.operator):
                    raise StructuralError(f"operator on ({state!r}, {sym!r}) has a column not summing to 1")

    def choices(self, state: str, symbol: str) -> tuple:
        try:
            return self.transitions[(state, symbol)]
        except KeyError:
            raise ConfigurationError(state, symbol) from None

    def operators(self) -> list:
        return [tr.operator for choices in self.transitions.values() for tr in choices]

    def is_interval(self) -> bool:
        return any(op.is_interval() for op in self.operators())

    def structure(self) -> tuple:
        """Hashable summary used for structural equality (operator names ignored)."""
        trans = tuple(
            sorted(
                ((s, a), tuple((tr.target, tr.operator.rows) for tr in choices))
                for (s, a), choices in self.transitions.items()
            )
        )
        return (
            self.name,
            self.classical_states,
            self.dim,
            self.alphabet,
            trans,
            self.initial_classical,
            self.initial_affine,
            self.accept_classical,
            tuple(sorted(self.accept_affine)),
        )

    def __eq__(self, other):
        if not isinstance(other, MachineSpec):
            return NotImplemented
        return self.structure() == other.structure()

    def __hash__(self):
        return hash(self.structure())

    def check_word(self, word: str) -> None:
        for pos, ch in enumerate(word):
            if ch in MARKERS:
                raise InputError(f"input contains reserved marker {ch!r} at position {pos}")
            if ch not in self.alphabet:
                raise InputError(f"symbol {ch!r} at position {pos} is not in the alphabet")


@dataclass(frozen=True)
class Configuration:
    classical: str
    affine: AffineVector
    choices: tuple = ()


def initial_configuration(machine: MachineSpec) -> Configuration:
    return Configuration(machine.initial_classical, basis_vector(machine.dim, machine.initial_affine))


def tape(word: str) -> str:
    return LEFT_MARKER + word + RIGHT_MARKER


def step(machine: MachineSpec, config: Configuration, symbol: str) -> list:
    """All successors of ``config`` on ``symbol``, in choice order."""
    return [
        Configuration(tr.target, apply(tr.operator, config.affine), config.choices + (idx,))
        for idx, tr in enumerate(machine.choices(config.classical, symbol))
    ]


def build_transitions(entries: Iterable[tuple]) -> dict:
    """Group ``(state, symbol, target, operator)`` rows into a transition map, keeping order."""
    table: dict = {}
    for state, symbol, target, op in entries:
        table.setdefault((state, symbol), []).append(Transition(target, op))
    return table


