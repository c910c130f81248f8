"""Line-oriented machine-definition format.

::

    machine subsetsum
    classical q0 acc
    affine 3
    alphabet 0 1 '#'          # quote symbols that collide with the comment char
    initial q0 e1
    accept-classical acc
    accept-affine e1
    matrix A0 3x3
    1 0 0
    0 2 0
    0 -1 1
    trans q0 '^' -> q0 A0     # repeated (state, symbol) lines are ordered choices

Scalars are integers or ``p/q``; decimals are rejected.
"""

from __future__ import annotations

import re
import shlex

from .affine import AffineOperator
from .errors import MachineFormatError, SerializationError, StructuralError
from .machine import MARKERS, MachineSpec, Transition
from .scalars import format_scalar, parse_scalar

__all__ = ["parse_machine", "emit_machine", "load_machine"]

_AFFINE_NAME = re.compile(r"^e(\d+)$")
_SHAPE = re.compile(r"^(\d+)x(\d+)$")
_REQUIRED = ("machine", "classical", "affine", "alphabet", "initial", "accept-classical", "accept-affine")


def _tokens(line: str, lineno: int) -> list:
    lexer = shlex.shlex(line, posix=True)
    lexer.whitespace_split = True
    lexer.commenters = "#"
    lexer.quotes = "'\""
    try:
        return list(lexer)
    except ValueError as exc:
        raise MachineFormatError(str(exc), lineno) from None


def _affine_index(name: str, dim: int, lineno: int) -> int:
    m = _AFFINE_NAME.match(name)
    if not m:
        raise MachineFormatError(f"expected an affine state name like e1, got {name!r}", lineno)
    idx = int(m.group(1)) - 1
    if not 0 <= idx < dim:
        raise MachineFormatError(f"affine state {name} out of range for dimension {dim}", lineno)
    return idx


def parse_machine(text: str) -> MachineSpec:
    """Parse a machine-definition document into a validated :class:`MachineSpec`."""
    lines = [(n, _tokens(raw, n)) for n, raw in enumerate(text.splitlines(), start=1)]
    lines = [(n, toks) for n, toks in lines if toks]

    header: dict = {}
    header_line: dict = {}
    matrices: dict = {}
    trans_rows: list = []

    i = 0
    while i < len(lines):
        lineno, toks = lines[i]
        key, args = toks[0], toks[1:]
        i += 1
        if key in _REQUIRED:
            if key in header:
                raise MachineFormatError(f"duplicate {key!r} declaration", lineno)
            header[key] = args
            header_line[key] = lineno
        elif key == "matrix":
            if len(args) != 2 or not _SHAPE.match(args[1]):
                raise MachineFormatError("expected 'matrix <name> <m>x<m>'", lineno)
            name = args[0]
            rows_n, cols_n = map(int, _SHAPE.match(args[1]).groups())
            if name in matrices:
                raise MachineFormatError(f"matrix {name!r} defined twice", lineno)
            rows = []
            for _ in range(rows_n):
                if i >= len(lines):
                    raise MachineFormatError(f"matrix {name!r} is missing rows", lineno)
                row_no, row = lines[i]
                i += 1
                if len(row) != cols_n:
                    raise MachineFormatError(f"matrix {name!r}: expected {cols_n} entries, got {len(row)}", row_no)
                try:
                    rows.append([parse_scalar(tok) for tok in row])
                except ValueError as exc:
                    raise MachineFormatError(str(exc), row_no) from None
            matrices[name] = (lineno, rows_n, cols_n, rows)
        elif key == "trans":
            if len(args) != 5 or args[2] != "->":
                raise MachineFormatError("expected 'trans <state> <symbol> -> <state> <matrix>'", lineno)
            trans_rows.append((lineno, args[0], args[1], args[3], args[4]))
        else:
            raise MachineFormatError(f"unknown directive {key!r}", lineno)

    for key in _REQUIRED:
        if key not in header:
            raise MachineFormatError(f"missing required {key!r} declaration")

    def single(key):
        args = header[key]
        if len(args) != 1:
            raise MachineFormatError(f"{key!r} takes exactly one argument", header_line[key])
        return args[0]

    name = single("machine")
    try:
        dim = int(single("affine"))
    except ValueError:
        raise MachineFormatError("affine dimension must be an integer", header_line["affine"]) from None
    if dim < 1:
        raise MachineFormatError("affine dimension must be positive", header_line["affine"])
    states = header["classical"]
    if not states:
        raise MachineFormatError("at least one classical state is required", header_line["classical"])
    alphabet = header["alphabet"]
    for sym in alphabet:
        if sym in MARKERS or len(sym) != 1:
            raise MachineFormatError(f"invalid alphabet symbol {sym!r}", header_line["alphabet"])
    if len(header["initial"]) != 2:
        raise MachineFormatError("expected 'initial <state> <eK>'", header_line["initial"])
    initial_state, initial_affine = header["initial"]
    initial_idx = _affine_index(initial_affine, dim, header_line["initial"])
    accept_state = single("accept-classical")
    accept_idx = {_affine_index(tok, dim, header_line["accept-affine"]) for tok in header["accept-affine"]}

    operators: dict = {}
    for mname, (lineno, rows_n, cols_n, rows) in matrices.items():
        if rows_n != dim or cols_n != dim:
            raise MachineFormatError(
                f"matrix {mname!r} is {rows_n}x{cols_n} but the affine dimension is {dim}", lineno
            )
        op = AffineOperator(rows, name=mname)
        for col, total in enumerate(op.column_sums(), start=1):
            if total != 1:
                raise MachineFormatError(f"matrix {mname!r}: column {col} sums to {total}, expected 1", lineno)
        operators[mname] = op

    known = set(states)
    table: dict = {}
    for lineno, src, sym, dst, mname in trans_rows:
        for s in (src, dst):
            if s not in known:
                raise MachineFormatError(f"unknown classical state {s!r}", lineno)
        if sym not in alphabet and sym not in MARKERS:
            raise MachineFormatError(f"symbol {sym!r} is neither in the alphabet nor a marker", lineno)
        if mname not in operators:
            raise MachineFormatError(f"undefined matrix {mname!r}", lineno)
        table.setdefault((src, sym), []).append(Transition(dst, operators[mname]))

    try:
        return MachineSpec(
            name=name,
            classical_states=tuple(states),
            dim=dim,
            alphabet=tuple(alphabet),
            transitions=table,
            initial_classical=initial_state,
            initial_affine=initial_idx,
            accept_classical=accept_state,
            accept_affine=frozenset(accept_idx),
        )
    except StructuralError as exc:
        raise MachineFormatError(str(exc)) from None


def load_machine(path) -> MachineSpec:
    with open(path, encoding="utf-8") as fh:
        return parse_machine(fh.read())


def _quote(sym: str) -> str:
    if re.match(r"^[A-Za-z0-9_.\-]+$", sym):
        return sym
    if sym == "'":
        return '"\'"'
    return f"'{sym}'"


_NAME_OK = re.compile(r"^[A-Za-z_][A-Za-z0-9_.\-]*$")


def emit_machine(machine: MachineSpec) -> str:
    """Serialize a rational-valued machine; :func:`parse_machine` inverts it."""
    if machine.is_interval():
        raise SerializationError("interval-valued machines cannot be serialized")

    names: dict = {}  # rows -> name
    used: set = set()
    counter = 0
    for choices in machine.transitions.values():
        for tr in choices:
            op = tr.operator
            if op.rows in names:
                continue
            candidate = op.name if op.name and _NAME_OK.match(op.name) and op.name not in used else None
            while candidate is None or candidate in used:
                candidate = f"M{counter}"
                counter += 1
            names[op.rows] = candidate
            used.add(candidate)

    out = [
        f"machine {machine.name}",
        "classical " + " ".join(machine.classical_states),
        f"affine {machine.dim}",
        "alphabet " + " ".join(_quote(s) for s in machine.alphabet),
        f"initial {machine.initial_classical} e{machine.initial_affine + 1}",
        f"accept-classical {machine.accept_classical}",
        "accept-affine " + " ".join(f"e{i + 1}" for i in sorted(machine.accept_affine)),
    ]
    m = machine.dim
    for rows, name in names.items():
        out.append(f"matrix {name} {m}x{m}")
        for row in rows:
            out.append(" ".join(format_scalar(x) for x in row))
    for (src, sym), choices in machine.transitions.items():
        for tr in choices:
            out.append(f"trans {src} {_quote(sym)} -> {tr.target} {names[tr.operator.rows]}")
    return "\n".join(out) + "\n"
