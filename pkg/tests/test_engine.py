from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from afav.affine import identity
from afav.engine import DEFAULT_BUDGET, default_budget, enumerate_paths, run_many
from afav.errors import ConfigurationError, InputError, InvariantViolation, ResourceError
from afav.gadgets import binary_encoding
from afav.machine import LEFT_MARKER, RIGHT_MARKER, MachineSpec, build_transitions
from afav.oracles import naive_enumerate
from afav.protocols import build_subsetsum_verifier, build_usquare_verifier
from afav.textformat import parse_machine
from afav.verification import dead_state_prune_hook

from helpers import GOOD, corrupted_machine, toy_machine

RATIONAL = parse_machine(GOOD + "trans s2 0 -> s2 M2\ntrans s2 1 -> s1 M1\ntrans s2 '#' -> s2 M2\n")


def _final_set(enum):
    return {(o.final_classical, o.affine.entries) for o in enum.outcomes}


def _assert_matches_naive(machine, word):
    enum = enumerate_paths(machine, word, dedup=False)
    naive = naive_enumerate(machine, word)
    assert [o.choices for o in enum.outcomes] == [p.choices for p in naive]
    assert [o.final_classical for o in enum.outcomes] == [p.final_classical for p in naive]
    assert [o.affine.entries for o in enum.outcomes] == [p.vector for p in naive]
    assert [o.accept_probability for o in enum.outcomes] == [p.accept_probability for p in naive]


def _binary_machine():
    v, a0, a1 = binary_encoding()
    rows = [
        ("s", LEFT_MARKER, "s", identity(3)),
        ("s", "0", "s", a0),
        ("s", "1", "s", a1),
        ("s", "1", "s", identity(3)),
        ("s", RIGHT_MARKER, "s", identity(3)),
    ]
    return MachineSpec("bin", ("s",), 3, ("0", "1"), build_transitions(rows), "s", 0, "s", frozenset({0}))


def test_deterministic_machine_has_one_path():
    v, a0, a1 = binary_encoding()
    rows = [("s", LEFT_MARKER, "s", identity(3)), ("s", "0", "s", a0), ("s", "1", "s", a1), ("s", RIGHT_MARKER, "s", identity(3))]
    m = MachineSpec("det", ("s",), 3, ("0", "1"), build_transitions(rows), "s", 0, "s", frozenset({0}))
    enum = enumerate_paths(m, "1011")
    assert len(enum.outcomes) == 1
    out = enum.outcomes[0]
    assert out.affine.entries == (1, 11, -11)
    assert out.accept_probability == Fraction(1, 23)
    assert out.choices == (0,) * 6
    assert len(naive_enumerate(m, "1011")) == 1


@settings(max_examples=60, deadline=None)
@given(st.text(alphabet="xy", max_size=9))
def test_toy_machine_matches_naive(word):
    _assert_matches_naive(toy_machine(), word)


@settings(max_examples=40, deadline=None)
@given(st.text(alphabet="01#", max_size=8))
def test_rational_machine_matches_naive(word):
    _assert_matches_naive(RATIONAL, word)


def test_large_numerators_switch_to_python_ints():
    m = _binary_machine()
    word = "1" * 70
    enum = enumerate_paths(m, word)
    top = max(enum.outcomes, key=lambda o: o.affine.entries[1])
    assert top.affine.entries[1] == 2**70 - 1
    assert top.accept_probability == Fraction(1, 2 ** 71 - 1)
    _assert_matches_naive(m, "1" * 12)


def test_outcomes_are_in_lexicographic_order():
    enum = enumerate_paths(build_subsetsum_verifier(1), "1#1#1#1#1", dedup=False)
    choices = [o.choices for o in enum.outcomes]
    assert choices == sorted(choices)
    assert len(choices) == 16


@settings(max_examples=40, deadline=None)
@given(st.text(alphabet="xy", max_size=10))
def test_dedup_equivalence_toy(word):
    m = toy_machine()
    on, off = enumerate_paths(m, word), enumerate_paths(m, word, dedup=False)
    assert _final_set(on) == _final_set(off)
    assert max(on.probabilities) == max(off.probabilities)
    assert min(on.probabilities) == min(off.probabilities)


def test_dedup_keeps_lexicographically_first_and_flags_merge():
    # skip and pick of a zero block reach the same configuration
    m = build_subsetsum_verifier(1)
    off = enumerate_paths(m, "1#0", dedup=False)
    on = enumerate_paths(m, "1#0")
    assert len(off.outcomes) == 2 and len(on.outcomes) == 1
    assert on.outcomes[0].choices == off.outcomes[0].choices
    assert on.outcomes[0].merged
    assert on.merged == 1
    assert not any(o.merged for o in off.outcomes)


def test_threads_give_identical_results():
    m = build_subsetsum_verifier(3)
    word = "1011#11#101#1#111#10"
    single = enumerate_paths(m, word, dedup=False)
    multi = enumerate_paths(m, word, dedup=False, threads=4)
    assert [(o.choices, o.final_classical, o.accept_probability) for o in single.outcomes] == [
        (o.choices, o.final_classical, o.accept_probability) for o in multi.outcomes
    ]


def test_run_many_matches_single_runs():
    m = build_usquare_verifier(2)
    words = ["0" * n for n in (7, 0, 3, 9, 3)]
    batch = run_many(m, words)
    assert list(batch) == ["0" * 7, "", "000", "0" * 9]
    for w, enum in batch.items():
        single = enumerate_paths(m, w)
        assert [(o.choices, o.accept_probability) for o in enum.outcomes] == [
            (o.choices, o.accept_probability) for o in single.outcomes
        ]


def test_run_many_statistics_are_per_word():
    m = build_subsetsum_verifier(1)
    hook = dead_state_prune_hook(m)
    words = ["1#1#1#1", "1#1#1", "10#1", "1"]
    batch = run_many(m, words, prune=hook)
    for w in words:
        single = enumerate_paths(m, w, prune=hook)
        assert (batch[w].merged, batch[w].pruned, batch[w].pruned_floor) == (
            single.merged,
            single.pruned,
            single.pruned_floor,
        )


def test_budget_exceeded_reports_step():
    m = build_subsetsum_verifier(1)
    with pytest.raises(ResourceError) as info:
        enumerate_paths(m, "1#1#1#1#1", dedup=False, budget=8)
    assert info.value.step is not None and info.value.step > 1
    assert "budget 8" in str(info.value)


def test_budget_from_environment(monkeypatch):
    assert default_budget() == DEFAULT_BUDGET == 2**22
    monkeypatch.setenv("AFAV_BUDGET", "4")
    assert default_budget() == 4
    with pytest.raises(ResourceError):
        enumerate_paths(build_usquare_verifier(1), "00000")
    monkeypatch.setenv("AFAV_BUDGET", "many")
    with pytest.raises(ValueError):
        default_budget()


def test_missing_transition_raises_configuration_error():
    rows = [("s", LEFT_MARKER, "s", identity(1)), ("s", "0", "t", identity(1)), ("s", RIGHT_MARKER, "s", identity(1))]
    m = MachineSpec("gap", ("s", "t"), 1, ("0",), build_transitions(rows), "s", 0, "s", frozenset({0}))
    with pytest.raises(ConfigurationError) as info:
        enumerate_paths(m, "00")
    assert (info.value.state, info.value.symbol) == ("t", "0")


def test_reserved_markers_in_input_rejected():
    with pytest.raises(InputError):
        enumerate_paths(build_usquare_verifier(1), "0$0")


def test_invariant_violation_detected():
    with pytest.raises(InvariantViolation):
        enumerate_paths(corrupted_machine(), "y")
    enumerate_paths(corrupted_machine(), "y", check_invariants=False)


def test_prune_hook_contract():
    m = build_usquare_verifier(1)
    with pytest.raises(ValueError):
        enumerate_paths(m, "000", prune=lambda view: [False])
    seen = []

    def spy(view):
        seen.append((view.step, view.symbol, view.remaining, len(view.states)))
        assert view.lo.shape == (len(view.states), m.dim)
        return np.zeros(len(view.states), dtype=bool)

    enumerate_paths(m, "00", prune=spy)
    assert [s[:3] for s in seen] == [(1, "^", 3), (2, "0", 2), (3, "0", 1)]


def test_choice_string_with_many_choices():
    ops = [identity(1).named(f"I{i}") for i in range(12)]
    rows = [("s", LEFT_MARKER, "s", op) for op in ops] + [("s", RIGHT_MARKER, "s", identity(1))]
    m = MachineSpec("wide", ("s",), 1, ("0",), build_transitions(rows), "s", 0, "s", frozenset({0}))
    enum = enumerate_paths(m, "", dedup=False)
    assert enum.outcomes[0].choice_string == "00"
    assert enum.outcomes[-1].choice_string == "11.0"
    assert enumerate_paths(build_usquare_verifier(1), "0").outcomes[0].choice_string == "000"
