"""Exact enumeration of every nondeterministic path of an ANfA.

The live frontier is stored as integer numerator matrices over one shared
positive denominator, so every entry is an exact rational and equal
configurations have equal rows. Rows are kept in lexicographic order of
their choice sequences: parents are expanded in order and children are
emitted parent-major, choice-minor. Keeping the first row of each duplicate
group therefore keeps the lexicographically smallest representative.

Numerators live in ``int64`` arrays while a cheap magnitude bound proves no
overflow is possible and move to object arrays of Python ints otherwise.
Interval-valued runs carry a second ``hi`` matrix; point operators act on
intervals by splitting into positive and negative parts, which is exact
for a point matrix times an interval vector.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Optional, Sequence

import numpy as np

from .affine import AffineOperator, AffineVector, apply, ratio_enclosure
from .errors import ConfigurationError, InvariantViolation, ResourceError
from .machine import LEFT_MARKER, RIGHT_MARKER, MachineSpec
from .scalars import RationalInterval

__all__ = [
    "DEFAULT_BUDGET",
    "default_budget",
    "PathOutcome",
    "Enumeration",
    "FrontierView",
    "enumerate_paths",
    "run_many",
]

DEFAULT_BUDGET = 2**22
_INT64_SAFE = 2**62


def default_budget() -> int:
    """Live-configuration budget, overridable with ``AFAV_BUDGET``."""
    env = os.environ.get("AFAV_BUDGET")
    if env:
        try:
            value = int(env)
        except ValueError:
            raise ValueError(f"AFAV_BUDGET must be an integer, got {env!r}") from None
        if value < 1:
            raise ValueError("AFAV_BUDGET must be positive")
        return value
    return DEFAULT_BUDGET


class _FinalBlock:
    """Shared storage for the paths of one run; outcomes index into it."""

    __slots__ = ("choices", "lo", "hi", "den")

    def __init__(self, choices, lo, hi, den):
        self.choices = choices
        self.lo = lo
        self.hi = hi  # None in exact mode
        self.den = den


class PathOutcome:
    """Final configuration of one path and its acceptance probability.

    Choice sequences and affine vectors are materialised on first access.
    """

    __slots__ = ("final_classical", "accept_probability", "merged", "_block", "_row")

    def __init__(self, final_classical, accept_probability, merged, block, row):
        self.final_classical = final_classical
        self.accept_probability = accept_probability
        self.merged = merged
        self._block = block
        self._row = row

    @property
    def choices(self) -> tuple:
        return tuple(self._block.choices[self._row].tolist())

    @property
    def affine(self) -> AffineVector:
        b, r = self._block, self._row
        den = b.den
        if b.hi is None:
            return AffineVector(Fraction(int(x), den) for x in b.lo[r])
        return AffineVector(
            RationalInterval(Fraction(int(x), den), Fraction(int(y), den)) for x, y in zip(b.lo[r], b.hi[r])
        )

    @property
    def choice_string(self) -> str:
        choices = self.choices
        if all(c < 10 for c in choices):
            return "".join(str(c) for c in choices)
        return ".".join(str(c) for c in choices)

    def key(self) -> tuple:
        """(classical, affine) identity used for dedup comparisons."""
        return (self.final_classical, self.affine.entries)

    def __repr__(self):
        return (
            f"PathOutcome(choices={self.choice_string!r}, final_classical={self.final_classical!r}, "
            f"accept_probability={self.accept_probability!r}, merged={self.merged})"
        )


@dataclass
class Enumeration:
    """All final paths of one run plus engine statistics."""

    word: str
    outcomes: list
    steps: int
    peak_live: int
    merged: int = 0
    pruned: int = 0
    # probability every cut path would have ended with, when the hook certifies one
    pruned_floor: object = None

    @property
    def probabilities(self) -> list:
        return [o.accept_probability for o in self.outcomes]


@dataclass(frozen=True)
class FrontierView:
    """Read-only snapshot handed to pruning hooks after each step.

    Affine entry ``(r, c)`` lies in ``[lo[r, c] / den, hi[r, c] / den]``.
    ``remaining`` counts symbols still to be read, including ``$``.
    """

    step: int
    symbol: str
    remaining: int
    states: tuple
    lo: np.ndarray
    hi: np.ndarray
    den: int


PruneHook = Callable[[FrontierView], Sequence[bool]]


class _PointOp:
    __slots__ = ("num", "num_obj", "den", "pos", "neg", "pos64", "neg64", "row_bound", "invertible")

    def __init__(self, op: AffineOperator):
        den = 1
        for row in op.rows:
            for x in row:
                den = den * x.denominator // math.gcd(den, x.denominator)
        nums = [[int(x * den) for x in row] for row in op.rows]
        self.den = den
        self.num_obj = np.array(nums, dtype=object)
        self.row_bound = max(sum(abs(x) for x in row) for row in nums)
        self.num = np.array(nums, dtype=np.int64) if self.row_bound < _INT64_SAFE else self.num_obj
        self.pos = np.where(self.num_obj > 0, self.num_obj, 0)
        self.neg = np.where(self.num_obj < 0, self.num_obj, 0)
        if self.num is not self.num_obj:
            self.pos64, self.neg64 = self.pos.astype(np.int64), self.neg.astype(np.int64)
        else:
            self.pos64 = self.neg64 = None
        self.invertible = _invertible(op.rows)


def _invertible(rows) -> bool:
    """Exact Gaussian elimination; True iff the matrix is non-singular."""
    a = [[Fraction(x) for x in row] for row in rows]
    m = len(a)
    for c in range(m):
        pivot = next((r for r in range(c, m) if a[r][c] != 0), None)
        if pivot is None:
            return False
        a[c], a[pivot] = a[pivot], a[c]
        for r in range(c + 1, m):
            f = a[r][c] / a[c][c]
            if f:
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    return True


class _Compiled:
    """Per-machine lookup tables: state indices and prepared operators."""

    def __init__(self, machine: MachineSpec):
        self.states = machine.classical_states
        self.index = {s: i for i, s in enumerate(self.states)}
        self.table = {}
        cache = {}
        for (state, sym), choices in machine.transitions.items():
            prepared = []
            for tr in choices:
                op = tr.operator
                if op.rows not in cache:
                    cache[op.rows] = op if op.is_interval() else _PointOp(op)
                prepared.append((self.index[tr.target], cache[op.rows]))
            self.table[(self.index[state], sym)] = prepared
        self.accept_state = self.index[machine.accept_classical]
        self.accept_cols = sorted(machine.accept_affine)
        self.rest_cols = [i for i in range(machine.dim) if i not in machine.accept_affine]


def _compiled(machine: MachineSpec) -> _Compiled:
    comp = machine.__dict__.get("_afav_compiled")
    if comp is None:
        comp = _Compiled(machine)
        object.__setattr__(machine, "_afav_compiled", comp)
    return comp


class _Frontier:
    __slots__ = ("states", "lo", "hi", "den", "merged", "history", "n_merged", "n_pruned")

    def __init__(self, states, lo, hi, den, merged, history, n_merged=0, n_pruned=0):
        self.states = states
        self.lo = lo
        self.hi = hi  # ``hi is lo`` in exact mode
        self.den = den
        self.merged = merged
        self.history = history  # tuple of (parent, choice) arrays, one per step
        # merges and cuts along this frontier's own prefix, so shared runs report per word
        self.n_merged = n_merged
        self.n_pruned = n_pruned

    @property
    def exact(self) -> bool:
        return self.hi is self.lo

    def __len__(self):
        return len(self.states)


def _max_abs(arr) -> int:
    if arr.size == 0:
        return 0
    if arr.dtype == object:
        return max(abs(int(arr.max())), abs(int(arr.min())))
    return max(abs(int(arr.max())), abs(int(arr.min())))


def _to_object(arr):
    return arr if arr.dtype == object else arr.astype(object)


def _apply_point(op: _PointOp, lo, hi, exact):
    """Numerators of ``op`` applied to rows ``lo``/``hi``; denominator grows by ``op.den``."""
    small = (
        lo.dtype != object
        and (exact or hi.dtype != object)
        and op.num is not op.num_obj
        and max(_max_abs(lo), 0 if exact else _max_abs(hi)) * op.row_bound < _INT64_SAFE
    )
    if exact:
        if small:
            out = lo @ op.num.T
        else:
            out = _to_object(lo) @ op.num_obj.T
        return out, out, op.den
    if small:
        pos, neg = op.pos64, op.neg64
        new_lo = lo @ pos.T + hi @ neg.T
        new_hi = hi @ pos.T + lo @ neg.T
    else:
        lo_o, hi_o = _to_object(lo), _to_object(hi)
        new_lo = lo_o @ op.pos.T + hi_o @ op.neg.T
        new_hi = hi_o @ op.pos.T + lo_o @ op.neg.T
    return new_lo, new_hi, op.den


def _apply_interval(op: AffineOperator, lo, hi, den, exact):
    """Slow path for operators with interval entries (one Python op per entry)."""
    rows = []
    for r in range(lo.shape[0]):
        if exact:
            vec = [Fraction(int(x), den) for x in lo[r]]
        else:
            vec = [RationalInterval(Fraction(int(a), den), Fraction(int(b), den)) for a, b in zip(lo[r], hi[r])]
        out = apply(op, AffineVector(vec, check=False))
        rows.append([x if isinstance(x, RationalInterval) else RationalInterval(x) for x in out.entries])
    common = 1
    for row in rows:
        for x in row:
            for q in (x.lo, x.hi):
                common = common * q.denominator // math.gcd(common, q.denominator)
    m = lo.shape[1]
    new_lo = np.empty((len(rows), m), dtype=object)
    new_hi = np.empty((len(rows), m), dtype=object)
    for r, row in enumerate(rows):
        for c, x in enumerate(row):
            new_lo[r, c] = int(x.lo * common)
            new_hi[r, c] = int(x.hi * common)
    return new_lo, new_hi, common, False


def _scale(arr, factor):
    if factor == 1:
        return arr
    if arr.dtype != object and _max_abs(arr) * factor < _INT64_SAFE:
        return arr * np.int64(factor)
    return _to_object(arr) * factor


def _array_gcd(arr) -> int:
    if arr.size == 0:
        return 0
    if arr.dtype == object:
        g = 0
        for x in arr.ravel():
            g = math.gcd(g, int(x))
            if g == 1:
                return 1
        return g
    return int(np.gcd.reduce(np.abs(arr).ravel()))


def _maybe_demote(arr):
    """Move an object array back to int64 when its values allow it."""
    if arr.dtype == object and arr.size and _max_abs(arr) < _INT64_SAFE:
        return arr.astype(np.int64)
    return arr


class _Runner:
    def __init__(self, machine, *, dedup, prune, budget, threads, check_invariants):
        self.machine = machine
        self.comp = _compiled(machine)
        self.dedup = dedup
        self.prune = prune
        self.budget = default_budget() if budget is None else budget
        self.threads = threads
        self.check = check_invariants
        self.merged_total = 0
        self.pruned_total = 0
        self.peak = 1
        self.steps = 0
        self._pool = ThreadPoolExecutor(max_workers=threads) if threads and threads > 1 else None

    def close(self):
        if self._pool is not None:
            self._pool.shutdown()

    def initial(self) -> _Frontier:
        m = self.machine.dim
        lo = np.zeros((1, m), dtype=np.int64)
        lo[0, self.machine.initial_affine] = 1
        states = np.array([self.comp.index[self.machine.initial_classical]], dtype=np.int64)
        return _Frontier(states, lo, lo, 1, np.zeros(1, dtype=bool), ())

    def advance(self, fr: _Frontier, symbol: str, step: int, remaining: int) -> _Frontier:
        n = len(fr)
        states = fr.states
        present = np.unique(states)
        branch = np.zeros(n, dtype=np.int64)
        plans = []
        for s in present.tolist():
            try:
                choices = self.comp.table[(s, symbol)]
            except KeyError:
                raise ConfigurationError(self.comp.states[s], symbol) from None
            rows = np.flatnonzero(states == s)
            branch[rows] = len(choices)
            plans.append((rows, choices))
        total = int(branch.sum())
        if total > self.budget:
            raise ResourceError(
                f"live configurations would reach {total} > budget {self.budget} "
                f"at step {step} (symbol {symbol!r})",
                step=step,
            )
        offsets = np.cumsum(branch) - branch

        jobs = []
        for rows, choices in plans:
            for j, (target, op) in enumerate(choices):
                jobs.append((rows, j, target, op))

        exact = fr.exact

        def run(job):
            rows, j, target, op = job
            if len(rows) == n:
                lo, hi = fr.lo, fr.hi
            else:
                lo, hi = fr.lo[rows], fr.hi[rows]
            if isinstance(op, _PointOp):
                new_lo, new_hi, d = _apply_point(op, lo, hi, exact)
                return new_lo, new_hi, fr.den * d, exact
            return _apply_interval(op, lo, hi, fr.den, exact)

        results = list(self._pool.map(run, jobs)) if self._pool else [run(job) for job in jobs]

        all_exact = all(r[3] for r in results)
        common = 1
        for r in results:
            common = common * r[2] // math.gcd(common, r[2])
        scaled = []
        use_object = False
        for (new_lo, new_hi, d, ex) in results:
            f = common // d
            s_lo = _scale(new_lo, f)
            s_hi = s_lo if (ex and new_hi is new_lo) else _scale(new_hi, f)
            use_object = use_object or s_lo.dtype == object or s_hi.dtype == object
            scaled.append((s_lo, s_hi))

        if len(jobs) == 1 and total == n:
            # one state, one successor: rows keep their order, nothing to scatter
            out_lo, out_hi = scaled[0]
            out_states = np.full(n, jobs[0][2], dtype=np.int64)
            parent = np.arange(n, dtype=np.int64)
            choice = np.zeros(n, dtype=np.int64)
            merged = fr.merged
        else:
            m = self.machine.dim
            dtype = object if use_object else np.int64
            out_lo = np.empty((total, m), dtype=dtype)
            out_hi = out_lo if all_exact else np.empty((total, m), dtype=dtype)
            out_states = np.empty(total, dtype=np.int64)
            parent = np.empty(total, dtype=np.int64)
            choice = np.empty(total, dtype=np.int64)
            for (rows, j, target, _op), (s_lo, s_hi) in zip(jobs, scaled):
                pos = offsets[rows] + j
                out_lo[pos] = s_lo
                if not all_exact:
                    out_hi[pos] = s_hi
                out_states[pos] = target
                parent[pos] = rows
                choice[pos] = j
            merged = fr.merged[parent]

        den = common
        g = 1
        if den > 1:  # integer machines never need reducing
            g = math.gcd(_array_gcd(out_lo), den)
            if not all_exact and g > 1:
                g = math.gcd(g, _array_gcd(out_hi))
        if g > 1:
            den //= g
            out_lo = out_lo // g
            out_hi = out_lo if all_exact else out_hi // g
        if out_lo.dtype == object:
            out_lo = _maybe_demote(out_lo)
            out_hi = out_lo if all_exact else _maybe_demote(out_hi)
            if out_lo.dtype != out_hi.dtype:
                out_lo, out_hi = _to_object(out_lo), _to_object(out_hi)

        n_merged, n_pruned = fr.n_merged, fr.n_pruned
        keep = None
        if self.dedup and total > 1 and not self._injective_step(jobs, total, n, exact and all_exact):
            keep, counts = self._dedup(out_states, out_lo, out_hi, all_exact)
            if len(keep) < total:
                self.merged_total += total - len(keep)
                n_merged += total - len(keep)
                merged = merged[keep] | (counts > 1)
                out_states, parent, choice = out_states[keep], parent[keep], choice[keep]
                out_lo = out_lo[keep]
                out_hi = out_lo if all_exact else out_hi[keep]

        if self.check:
            self._check(out_lo, out_hi, den, all_exact, step, symbol)

        if self.prune is not None and symbol != RIGHT_MARKER and len(out_states):
            view = FrontierView(
                step=step,
                symbol=symbol,
                remaining=remaining,
                states=tuple(self.comp.states[s] for s in out_states.tolist()),
                lo=out_lo,
                hi=out_hi,
                den=den,
            )
            cut = np.asarray(self.prune(view), dtype=bool)
            if cut.shape != out_states.shape:
                raise ValueError("prune hook must return one flag per live configuration")
            if cut.any():
                keep_rows = np.flatnonzero(~cut)
                self.pruned_total += int(cut.sum())
                n_pruned += int(cut.sum())
                out_states, parent, choice = out_states[keep_rows], parent[keep_rows], choice[keep_rows]
                merged = merged[keep_rows]
                out_lo = out_lo[keep_rows]
                out_hi = out_lo if all_exact else out_hi[keep_rows]

        self.peak = max(self.peak, len(out_states))
        self.steps = max(self.steps, step)
        history = fr.history + ((parent, choice),)
        return _Frontier(out_states, out_lo, out_hi, den, merged, history, n_merged, n_pruned)

    @staticmethod
    def _injective_step(jobs, total, n, exact) -> bool:
        """A deduplicated exact frontier stays duplicate-free under this step.

        Holds when every row has one successor, each operator is invertible
        and distinct source states land in distinct target states.
        """
        if not exact or total != n:
            return False
        targets = set()
        for _rows, _j, target, op in jobs:
            if not (isinstance(op, _PointOp) and op.invertible) or target in targets:
                return False
            targets.add(target)
        return True

    @staticmethod
    def _dedup(states, lo, hi, exact):
        n = len(states)
        if lo.dtype != object and (exact or hi.dtype != object):
            parts = [states[:, None], lo] if exact else [states[:, None], lo, hi]
            keys = np.ascontiguousarray(np.concatenate(parts, axis=1).astype(np.int64))
            view = keys.view(np.dtype((np.void, keys.dtype.itemsize * keys.shape[1]))).ravel()
            _, first, inverse, counts = np.unique(view, return_index=True, return_inverse=True, return_counts=True)
            order = np.argsort(first, kind="stable")
            return first[order], counts[order]
        seen: dict = {}
        keep = []
        counts = []
        for r in range(n):
            key = (int(states[r]), tuple(lo[r].tolist()), None if exact else tuple(hi[r].tolist()))
            slot = seen.get(key)
            if slot is None:
                seen[key] = len(keep)
                keep.append(r)
                counts.append(1)
            else:
                counts[slot] += 1
        return np.array(keep, dtype=np.int64), np.array(counts, dtype=np.int64)

    @staticmethod
    def _check(lo, hi, den, exact, step, symbol):
        if lo.shape[0] == 0:
            return
        if exact:
            sums = lo.sum(axis=1)
            if not np.all(sums == den):
                raise InvariantViolation(f"entry sum != 1 after step {step} ({symbol!r})")
            if not np.all(np.abs(lo).sum(axis=1) >= den):
                raise InvariantViolation(f"l1 norm < 1 after step {step} ({symbol!r})")
        else:
            if not (np.all(lo.sum(axis=1) <= den) and np.all(hi.sum(axis=1) >= den)):
                raise InvariantViolation(f"interval entry sum excludes 1 after step {step} ({symbol!r})")
            upper_l1 = np.maximum(np.abs(lo), np.abs(hi)).sum(axis=1)
            if not np.all(upper_l1 >= den):
                raise InvariantViolation(f"l1 norm certainly < 1 after step {step} ({symbol!r})")

    def finalize(self, fr: _Frontier, word: str) -> Enumeration:
        n = len(fr)
        steps = len(fr.history)
        choices = np.empty((n, steps), dtype=np.int64)
        idx = np.arange(n)
        for k in range(steps - 1, -1, -1):
            parent, choice = fr.history[k]
            choices[:, k] = choice[idx]
            idx = parent[idx]

        comp = self.comp
        acc = np.zeros(self.machine.dim, dtype=bool)
        acc[comp.accept_cols] = True
        accepting = fr.states == comp.accept_state
        lo, hi = fr.lo, fr.hi
        wide = lo.dtype == object or (
            not fr.exact and hi.dtype == object
        ) or max(_max_abs(lo), 0 if fr.exact else _max_abs(hi)) * (lo.shape[1] + 1) >= _INT64_SAFE
        if wide:
            lo = _to_object(lo)
            hi = lo if fr.exact else _to_object(hi)
        zero = Fraction(0)
        if fr.exact:
            mag = np.abs(lo)
            a = mag[:, acc].sum(axis=1).tolist()
            t = mag.sum(axis=1).tolist()
            probs = [Fraction(int(a[r]), int(t[r])) if ok else zero for r, ok in enumerate(accepting.tolist())]
        else:
            straddle = (lo < 0) & (hi > 0)
            abs_lo = np.where(lo >= 0, lo, np.where(hi <= 0, -hi, 0))
            abs_hi = np.where(straddle, np.maximum(-lo, hi), np.maximum(np.abs(lo), np.abs(hi)))
            a_lo = abs_lo[:, acc].sum(axis=1).tolist()
            a_hi = abs_hi[:, acc].sum(axis=1).tolist()
            r_lo = abs_lo[:, ~acc].sum(axis=1).tolist()
            r_hi = abs_hi[:, ~acc].sum(axis=1).tolist()
            probs = [
                ratio_enclosure(int(a_lo[r]), int(a_hi[r]), int(r_lo[r]), int(r_hi[r])) if ok else zero
                for r, ok in enumerate(accepting.tolist())
            ]
        block = _FinalBlock(choices, fr.lo, None if fr.exact else fr.hi, int(fr.den))
        names = comp.states
        state_list = fr.states.tolist()
        merged = fr.merged.tolist()
        outcomes = [PathOutcome(names[state_list[r]], probs[r], merged[r], block, r) for r in range(n)]
        return Enumeration(
            word=word,
            outcomes=outcomes,
            steps=steps,
            peak_live=self.peak,
            merged=fr.n_merged,
            pruned=fr.n_pruned,
            pruned_floor=getattr(self.prune, "pruned_probability", None) if fr.n_pruned else None,
        )


class _TrieNode:
    __slots__ = ("children", "end", "height")

    def __init__(self):
        self.children = {}
        self.end = False
        self.height = 0  # longest word suffix below this node


def run_many(
    machine: MachineSpec,
    words: Iterable[str],
    *,
    dedup: bool = True,
    prune: Optional[PruneHook] = None,
    budget: Optional[int] = None,
    threads: int = 1,
    check_invariants: bool = True,
) -> dict:
    """Enumerate paths for several inputs, sharing work on common prefixes.

    Returns a dict mapping each distinct word to its :class:`Enumeration`.
    ``merged`` and ``pruned`` are exact per word; ``peak_live`` and
    ``steps`` are shared across the whole batch.
    """
    words = list(dict.fromkeys(words))
    for w in words:
        machine.check_word(w)
    root = _TrieNode()
    for w in words:
        node = root
        for i, ch in enumerate(w):
            node.height = max(node.height, len(w) - i)
            node = node.children.setdefault(ch, _TrieNode())
        node.end = True

    runner = _Runner(
        machine, dedup=dedup, prune=prune, budget=budget, threads=threads, check_invariants=check_invariants
    )
    results = {}
    try:
        start = runner.advance(runner.initial(), LEFT_MARKER, 1, root.height + 1)
        stack = [("", root, start)]
        while stack:
            prefix, node, fr = stack.pop()
            depth = len(prefix)
            if node.end:
                final = runner.advance(fr, RIGHT_MARKER, depth + 2, 0)
                results[prefix] = runner.finalize(final, prefix)
            for sym in sorted(node.children, reverse=True):
                child = node.children[sym]
                nxt = runner.advance(fr, sym, depth + 2, child.height + 1)
                stack.append((prefix + sym, child, nxt))
    finally:
        runner.close()
    return {w: results[w] for w in words}


def enumerate_paths(
    machine: MachineSpec,
    word: str,
    *,
    dedup: bool = True,
    prune: Optional[PruneHook] = None,
    budget: Optional[int] = None,
    threads: int = 1,
    check_invariants: bool = True,
) -> Enumeration:
    """Run ``machine`` on ``^ word $`` and return every final path.

    With ``dedup`` identical (classical, affine) configurations are merged
    after each step, keeping the lexicographically smallest choice
    sequence; the survivor is flagged ``merged``. ``prune`` may cut live
    configurations whose final probability it can certify as harmless.
    """
    machine.check_word(word)
    runner = _Runner(
        machine, dedup=dedup, prune=prune, budget=budget, threads=threads, check_invariants=check_invariants
    )
    try:
        fr = runner.initial()
        tape = LEFT_MARKER + word + RIGHT_MARKER
        for pos, sym in enumerate(tape, start=1):
            fr = runner.advance(fr, sym, pos, len(tape) - pos)
        return runner.finalize(fr, word)
    finally:
        runner.close()
