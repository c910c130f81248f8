"""Command-line front end: ``afav <subcommand> ...``.

Exit codes: 0 accept, 1 reject, 2 inconclusive; errors use 3 and up so
they never collide with a decision.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction

from . import oracles
from .affine import AffineOperator, AffineVector, apply
from .engine import enumerate_paths
from .errors import (
    AfavError,
    ConfigurationError,
    InputError,
    InvariantViolation,
    MachineFormatError,
    ParameterError,
    PrecisionError,
    ResourceError,
    SerializationError,
    StructuralError,
)
from .gadgets import (
    SQUARE_VARIANTS,
    PolynomialSpec,
    binary_encoding,
    counting_method1,
    counting_method2,
    polynomial_gadget,
    square_gadget,
)
from .protocols import (
    UnaryVerifierConfig,
    build_subsetsum_verifier,
    build_unary_verifier,
    build_upoly_verifier,
    build_usquare_verifier,
    load_language_spec,
    unary_prune_hook,
)
from .scalars import RationalInterval, format_scalar, parse_scalar
from .textformat import emit_machine, load_machine
from .verification import ACCEPT, INCONCLUSIVE, REJECT, dead_state_prune_hook, decide

EXIT_DECISION = {ACCEPT: 0, REJECT: 1, INCONCLUSIVE: 2}
EXIT_USAGE = 3
EXIT_FORMAT = 4
EXIT_PARAMETER = 5
EXIT_RESOURCE = 6
EXIT_IO = 7
EXIT_INTERNAL = 8
EXIT_ORACLE_DISAGREES = 9


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad usage, which would read as "inconclusive"
    def error(self, message):
        raise _UsageError(f"{self.prog}: error: {message}")


def _rational(text: str) -> Fraction:
    try:
        return parse_scalar(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value}")
    return value


def _natural(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if value < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {value}")
    return value


# -- reports -----------------------------------------------------------------


def _json_scalar(x):
    if isinstance(x, RationalInterval):
        return {"lo": _json_scalar(x.lo), "hi": _json_scalar(x.hi)}
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _report(machine, word, result, enum, args, oracle=None) -> dict:
    paths = []
    if args.list_paths:
        for o in result.outcomes:
            paths.append((o.choice_string, o.final_classical, o.accept_probability, o.merged))
    rep = {
        "machine": machine.name,
        "input": word,
        "epsilon": result.epsilon,
        "paths": paths,
        "path_count": len(enum.outcomes),
        "merged": enum.merged,
        "pruned": enum.pruned,
        "max": result.max_probability,
        "min": result.min_probability,
        "decision": result.decision,
    }
    if oracle is not None:
        member, agree = oracle
        rep["oracle"] = "member" if member else "non-member"
        rep["agree"] = agree
    return rep


def _render_text(rep: dict) -> str:
    lines = [f"machine={rep['machine']}", f"input={rep['input']}", f"epsilon={format_scalar(rep['epsilon'])}"]
    for choices, state, p, _merged in rep["paths"]:
        lines.append(f"path {choices} state={state} p={format_scalar(p, decimal=True)}")
    lines.append(f"paths={rep['path_count']} merged={rep['merged']} pruned={rep['pruned']}")
    lines.append(f"max={format_scalar(rep['max'], decimal=True)}")
    lines.append(f"decision={rep['decision']}")
    if "oracle" in rep:
        lines.append(f"oracle={rep['oracle']} agree={'yes' if rep['agree'] else 'no'}")
    return "\n".join(lines) + "\n"


def _render_json(rep: dict) -> str:
    doc = dict(rep)
    doc["epsilon"] = _json_scalar(rep["epsilon"])
    doc["max"] = _json_scalar(rep["max"])
    doc["min"] = _json_scalar(rep["min"])
    doc["paths"] = [
        {"choices": c, "state": s, "p": _json_scalar(p), "merged": m} for c, s, p, m in rep["paths"]
    ]
    return json.dumps(doc, indent=2, sort_keys=False) + "\n"


def _execute(machine, word, epsilon, args, prune=None, oracle_member=None) -> int:
    started = time.perf_counter()
    enum = enumerate_paths(
        machine,
        word,
        dedup=not args.no_dedup,
        prune=prune,
        budget=args.budget,
        threads=args.threads,
    )
    result = decide(enum, epsilon)
    oracle = None
    if oracle_member is not None:
        expected = ACCEPT if oracle_member else REJECT
        oracle = (oracle_member, result.decision == expected)
    rep = _report(machine, word, result, enum, args, oracle)
    sys.stdout.write(_render_json(rep) if args.json else _render_text(rep))
    if args.timing:
        print(f"time={time.perf_counter() - started:.3f}s", file=sys.stderr)
    if oracle is not None and not oracle[1]:
        return EXIT_ORACLE_DISAGREES
    return EXIT_DECISION[result.decision]


# -- subcommands ---------------------------------------------------------------


def cmd_run(args) -> int:
    machine = load_machine(args.machine)
    machine.check_word(args.input)
    prune = dead_state_prune_hook(machine) if args.prune else None
    return _execute(machine, args.input, args.epsilon, args, prune=prune)


def _default_epsilon(args, t):
    return args.epsilon if args.epsilon is not None else Fraction(1, 2 * t + 1)


def cmd_subsetsum(args) -> int:
    machine = build_subsetsum_verifier(args.t)
    machine.check_word(args.input)
    member = None
    if args.check:
        member = oracles.subsetsum_membership(args.input) if "#" in args.input else False
    return _execute(machine, args.input, _default_epsilon(args, args.t), args, oracle_member=member)


def cmd_usquare(args) -> int:
    machine = build_usquare_verifier(args.t)
    member = oracles.perfect_square(args.n) if args.check else None
    return _execute(machine, "0" * args.n, _default_epsilon(args, args.t), args, oracle_member=member)


def cmd_upoly(args) -> int:
    P = PolynomialSpec.parse(args.coeffs)
    machine = build_upoly_verifier(P, args.t)
    member = oracles.poly_image_member(P.coefficients, args.n) if args.check else None
    return _execute(machine, "0" * args.n, _default_epsilon(args, args.t), args, oracle_member=member)


def _unary_config(args) -> UnaryVerifierConfig:
    lang = load_language_spec(args.lang, truncation=args.precision)
    return UnaryVerifierConfig(lang, args.k)


def cmd_unary(args) -> int:
    cfg = _unary_config(args)
    machine = build_unary_verifier(cfg)
    epsilon = args.epsilon if args.epsilon is not None else cfg.target
    prune = unary_prune_hook(cfg.language.base) if args.prune else None
    member = cfg.language.contains(args.n) if args.check else None
    return _execute(machine, "a" * args.n, epsilon, args, prune=prune, oracle_member=member)


def _matrix_text(op: AffineOperator, name: str) -> list:
    lines = [f"matrix {name} {op.dim}x{op.dim}"]
    lines += [" ".join(format_scalar(x) for x in row) for row in op.rows]
    return lines


def _vector_text(v: AffineVector) -> str:
    return "(" + ", ".join(format_scalar(x) for x in v.entries) + ")"


def cmd_gadget(args) -> int:
    lines = []
    if args.kind == "binary":
        v, a0, a1 = binary_encoding()
        lines += _matrix_text(a0, "A0") + _matrix_text(a1, "A1")
        word = args.w or ""
        if any(ch not in "01" for ch in word):
            raise ParameterError(f"--w takes a bit string, got {word!r}")
        lines.append(f"step 0 w= v={_vector_text(v)}")
        for i, ch in enumerate(word, start=1):
            v = apply(a1 if ch == "1" else a0, v)
            lines.append(f"step {i} w={word[:i]} v={_vector_text(v)}")
    else:
        if args.kind == "count1":
            g = counting_method1()
        elif args.kind == "count2":
            g = counting_method2()
        elif args.kind == "square":
            g = square_gadget(args.variant)
        else:
            if not args.coeffs:
                raise ParameterError("gadget poly needs --coeffs c0,c1,...")
            g = polynomial_gadget(PolynomialSpec.parse(args.coeffs))
        lines += _matrix_text(g.operator, g.operator.name or "G")
        lines.append(f"value-index e{g.value_index + 1}")
        v = g.initial
        lines.append(f"step 0 v={_vector_text(v)}")
        for i in range(1, (args.steps or 0) + 1):
            v = apply(g.operator, v)
            lines.append(f"step {i} v={_vector_text(v)}")
    sys.stdout.write("\n".join(lines) + "\n")
    return 0


def cmd_emit(args) -> int:
    if args.protocol == "subsetsum":
        machine = build_subsetsum_verifier(args.t)
    elif args.protocol == "usquare":
        machine = build_usquare_verifier(args.t)
    elif args.protocol == "upoly":
        machine = build_upoly_verifier(PolynomialSpec.parse(args.coeffs), args.t)
    else:
        machine = build_unary_verifier(_unary_config(args))
    text = emit_machine(machine)
    if args.output in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    return 0


# -- parser --------------------------------------------------------------------


def _run_flags(p, epsilon_default=None, with_prune=True):
    p.add_argument(
        "--epsilon",
        type=_rational,
        default=epsilon_default,
        help="error bound, an exact rational in [0, 1/2)",
    )
    p.add_argument("--no-dedup", action="store_true", help="materialize the full computation tree")
    if with_prune:
        p.add_argument("--prune", action="store_true", help="cut paths certified not to matter")
    p.add_argument("--json", action="store_true", help="print the report as JSON")
    p.add_argument("--list-paths", action="store_true", help="print one line per final path")
    p.add_argument("--budget", type=_positive_int, default=None, help="live configuration limit")
    p.add_argument("--threads", type=_positive_int, default=1)
    p.add_argument("--timing", action="store_true", help="print elapsed time on stderr")


def _unary_source_flags(p):
    p.add_argument("--lang", required=True, help="language spec file")
    p.add_argument("--k", type=_rational, default=None, help="end-marker amplification (default per base)")
    p.add_argument("--precision", type=_positive_int, default=None, help="truncation depth T for oracle languages")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="afav", description="Exact simulation of affine finite verifiers.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("run", help="run a machine file on one input")
    p.add_argument("machine", help="machine-definition file")
    p.add_argument("input", help="input word (no end-markers)")
    _run_flags(p, epsilon_default=Fraction(1, 3))
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("subsetsum", help="subset-sum verifier V(t)")
    p.add_argument("--t", type=_positive_int, default=1)
    p.add_argument("--input", required=True)
    p.add_argument("--check", action="store_true", help="compare with the brute-force oracle")
    _run_flags(p, with_prune=False)
    p.set_defaults(func=cmd_subsetsum)

    p = sub.add_parser("usquare", help="verifier for {0^(i^2)}")
    p.add_argument("--t", type=_positive_int, default=1)
    p.add_argument("--n", type=_natural, required=True, help="input length")
    p.add_argument("--check", action="store_true")
    _run_flags(p, with_prune=False)
    p.set_defaults(func=cmd_usquare)

    p = sub.add_parser("upoly", help="verifier for {0^P(i)}")
    p.add_argument("--coeffs", required=True, help="c0,c1,...,cd")
    p.add_argument("--t", type=_positive_int, default=1)
    p.add_argument("--n", type=_natural, required=True)
    p.add_argument("--check", action="store_true")
    _run_flags(p, with_prune=False)
    p.set_defaults(func=cmd_upoly)

    p = sub.add_parser("unary", help="verifier for an arbitrary unary language")
    _unary_source_flags(p)
    p.add_argument("--n", type=_natural, required=True)
    p.add_argument("--check", action="store_true", help="compare with the language's membership bits")
    _run_flags(p)
    p.set_defaults(func=cmd_unary)

    p = sub.add_parser("gadget", help="print an encoding gadget and its trajectory")
    p.add_argument("kind", choices=("binary", "count1", "count2", "square", "poly"))
    p.add_argument("--w", default=None, help="bit string for the binary encoding")
    p.add_argument("--steps", type=_natural, default=0)
    p.add_argument("--coeffs", default=None)
    p.add_argument("--variant", choices=SQUARE_VARIANTS, default="dim4")
    p.set_defaults(func=cmd_gadget)

    p = sub.add_parser("emit", help="write a verifier as a machine-definition file")
    esub = p.add_subparsers(dest="protocol", required=True, parser_class=_Parser)
    emitters = {name: esub.add_parser(name) for name in ("subsetsum", "usquare", "upoly", "unary")}
    for name, e in emitters.items():
        if name == "upoly":
            e.add_argument("--coeffs", required=True)
        if name == "unary":
            _unary_source_flags(e)
        else:
            e.add_argument("--t", type=_positive_int, default=1)
        e.add_argument("-o", "--output", default=None, help="output path (default stdout)")
        e.set_defaults(func=cmd_emit)
    return parser


def _exit_code(exc: BaseException) -> int:
    if isinstance(exc, MachineFormatError):
        return EXIT_FORMAT
    if isinstance(exc, ResourceError):
        return EXIT_RESOURCE
    if isinstance(exc, InvariantViolation):
        return EXIT_INTERNAL
    if isinstance(
        exc,
        (ParameterError, InputError, ConfigurationError, SerializationError, StructuralError, PrecisionError),
    ):
        return EXIT_PARAMETER
    if isinstance(exc, AfavError):
        return EXIT_INTERNAL
    return EXIT_PARAMETER


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except _UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except OSError as exc:
        print(f"afav: {exc}", file=sys.stderr)
        return EXIT_IO
    except (AfavError, ValueError) as exc:
        print(f"afav: {type(exc).__name__}: {exc}", file=sys.stderr)
        return _exit_code(exc)


if __name__ == "__main__":
    sys.exit(main())
