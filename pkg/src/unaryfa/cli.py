"""Command-line interface: `unaryfa <command> ...`.

Exit codes: 0 relation holds / success, 1 relation fails (witness on
stdout), 2 input error, 3 guard exceeded or inexact oracle.
"""

from __future__ import annotations

import argparse
import os
import sys

from . import errors
from .chrobak import determinize, nfa_to_chrobak, normalize
from .core import ChrobakNF, UnaryNfa, ambiguity_chrobak, ambiguity_nfa, chrobak_to_nfa, membership_bits
from .uaf import parse_uaf, print_uaf

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_GUARD = 0, 1, 2, 3


class _Usage(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _Usage(message)


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path) as fh:
        return fh.read()


def _write(path: str, text: str) -> None:
    if path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _load(path: str):
    return parse_uaf(_read(path))


def _chrobak(a) -> ChrobakNF:
    return a if isinstance(a, ChrobakNF) else nfa_to_chrobak(a)


def _nfa(a) -> UnaryNfa:
    return a if isinstance(a, UnaryNfa) else chrobak_to_nfa(a)


def _accepts(a, length: int) -> bool:
    if isinstance(a, ChrobakNF):
        return a.accepts(length)
    return bool(membership_bits(a, length + 1)[length])


def _witness(value: int, left, right=None) -> int:
    """Print a failing length after checking it really separates the inputs."""
    if left is not None and not _accepts(left, value):
        raise AssertionError(f"witness {value} not accepted by the left side")
    if right is not None and _accepts(right, value):
        raise AssertionError(f"witness {value} accepted by the right side")
    print(f"witness {value}")
    return EXIT_FAIL


def _relation_exit(verdict, left, right) -> int:
    if verdict.holds:
        print("holds")
        return EXIT_OK
    return _witness(verdict.witness.value, left, right)


# -- commands ----------------------------------------------------------------


def cmd_convert(args) -> int:
    a = _load(args.input)
    if args.to == "nfa":
        out = _nfa(a)
    else:
        out = _chrobak(a)
        if args.normalize:
            out = normalize(out)
        if args.determinize:
            out = determinize(out, args.guard)
    _write(args.output, print_uaf(out))
    return EXIT_OK


def cmd_complement(args) -> int:
    from .regops import complement_ufa

    _write(args.output, print_uaf(complement_ufa(_chrobak(_load(args.input)))))
    return EXIT_OK


def cmd_op(args) -> int:
    from . import regops

    unary = args.name == "star"
    if unary and len(args.inputs) != 1:
        raise _Usage("star takes one input")
    if not unary and len(args.inputs) != 2:
        raise _Usage(f"{args.name} takes two inputs")
    ins = [_load(p) for p in args.inputs]
    name = args.name
    if name == "star":
        a = ins[0]
        out = regops.star(a) if isinstance(a, UnaryNfa) else regops.star_chrobak(a)
    elif name == "intersect":
        out = regops.intersect(_nfa(ins[0]), _nfa(ins[1]))
    elif name == "disjoint-union":
        out = regops.disjoint_union(_nfa(ins[0]), _nfa(ins[1]))
    elif name == "concat":
        out = regops.concat_nfa(_nfa(ins[0]), _nfa(ins[1]))
    elif name == "concat-bits":
        out = regops.concat_via_bits(_chrobak(ins[0]), _chrobak(ins[1]), args.guard)
    elif name == "union":
        out = regops.union_ufa(_chrobak(ins[0]), _chrobak(ins[1]))
    elif name == "symdiff":
        out = regops.symdiff_ufa(_chrobak(ins[0]), _chrobak(ins[1]))
    else:
        raise _Usage(f"unknown operation {name!r}")
    _write(args.output, print_uaf(out))
    return EXIT_OK


def cmd_compare(args) -> int:
    from .decision import nfa_equal, nfa_subset

    a, b = _chrobak(_load(args.left)), _chrobak(_load(args.right))
    if args.relation == "subset":
        return _relation_exit(nfa_subset(a, b), a, b)
    verdict = nfa_equal(a, b)
    if verdict.holds:
        print("holds")
        return EXIT_OK
    w = verdict.witness.value
    return _witness(w, a if _accepts(a, w) else b, b if _accepts(a, w) else a)


def cmd_universal(args) -> int:
    from .decision import nfa_universal, ufa_universal

    a = _chrobak(_load(args.input))
    if args.mode != "thm2" and ufa_universal(a, args.mode):
        print("holds")
        return EXIT_OK
    verdict = nfa_universal(a)
    if args.mode != "thm2" and verdict.holds:
        raise AssertionError("density test and comparison disagree")
    if verdict.holds:
        print("holds")
        return EXIT_OK
    return _witness(verdict.witness.value, None, a)


def cmd_inclusion(args) -> int:
    from .decision import ufa_inclusion

    a, b = _chrobak(_load(args.left)), _chrobak(_load(args.right))
    return _relation_exit(ufa_inclusion(a, b), a, b)


def cmd_ambiguity(args) -> int:
    a = _load(args.input)
    if isinstance(a, ChrobakNF):
        report = ambiguity_chrobak(a)
    else:
        report = ambiguity_nfa(a, args.max_steps)
    print(report.verdict.value)
    if report.verdict.value == "Ambiguous":
        print(f"witness {report.witness.value}")
        return EXIT_FAIL
    if report.verdict.value == "UnknownBeyondBound":
        return EXIT_GUARD
    return EXIT_OK


def cmd_eval(args) -> int:
    from .decision import eval_formula

    bindings = {}
    for item in args.bind:
        name, sep, path = item.partition("=")
        if not sep or not name:
            raise _Usage(f"--bind needs NAME=FILE, got {item!r}")
        bindings[name] = _chrobak(_load(path))
    result = eval_formula(args.formula, bindings, allow_concat=args.allow_concat)
    if isinstance(result, bool):
        print("true" if result else "false")
        return EXIT_OK if result else EXIT_FAIL
    _write(args.output, print_uaf(result))
    return EXIT_OK


def _manifest(pairs) -> str:
    return "".join(f"{k} {v}\n" for k, v in pairs)


def _groups_text(groups) -> str:
    return " ".join(",".join(str(j + 1) for j in g) or "-" for g in groups)


def _write_dir(out_dir: str, files: dict) -> None:
    os.makedirs(out_dir, exist_ok=True)
    for name, text in files.items():
        with open(os.path.join(out_dir, name), "w") as fh:
            fh.write(text)


def cmd_gen(args) -> int:
    from . import hardness

    if args.family in ("prop1", "formula"):
        if not args.cnf:
            raise _Usage(f"gen {args.family} needs --cnf FILE")
        cnf = hardness.parse_dimacs(_read(args.cnf))
        if args.three_occur:
            cnf = hardness.to_three_occur(cnf)
    if args.family == "prop1":
        aut, meta = hardness.gen_universality_nfa(cnf)
        manifest = _manifest(
            [
                ("primes", " ".join(map(str, meta.primes.primes))),
                ("groups", _groups_text(meta.groups)),
                ("r", meta.r),
                ("s", meta.s),
            ]
        )
        if args.out_dir:
            _write_dir(args.out_dir, {"nfa.uaf": print_uaf(aut), "manifest.txt": manifest})
        else:
            _write(args.output, print_uaf(aut))
            if args.manifest:
                _write(args.manifest, manifest)
        return EXIT_OK
    if args.family == "formula":
        h1, h2, k, meta = hardness.gen_formula_instance(cnf)
        manifest = _manifest(
            [
                ("primes", " ".join(map(str, meta.primes))),
                ("groups", _groups_text(meta.groups)),
                ("modulus", meta.width),
                ("m", meta.m),
                ("m_prime", meta.m_prime),
            ]
        )
        files = {"h1.uaf": print_uaf(h1), "h2.uaf": print_uaf(h2), "k.uaf": print_uaf(k), "manifest.txt": manifest}
    else:
        if args.m is None:
            raise _Usage("gen concat-blowup needs --m N")
        u, h, meta = hardness.gen_concat_blowup(args.m)
        manifest = _manifest(
            [
                ("modulus", meta.expected.modulus),
                ("residue", meta.expected.residue),
                ("primes", " ".join(map(str, meta.primes))),
                ("k", meta.k),
                ("m", meta.m),
            ]
        )
        files = {"u.uaf": print_uaf(u), "h.uaf": print_uaf(h), "manifest.txt": manifest}
    if not args.out_dir:
        raise _Usage(f"gen {args.family} writes several files; pass --out-dir DIR")
    _write_dir(args.out_dir, files)
    sys.stdout.write(manifest)
    return EXIT_OK


def cmd_oracle(args) -> int:
    from .oracle import Relation, oracle_bits, oracle_relation

    a = _load(args.inputs[0])
    if args.relation == "bits":
        traj = oracle_bits(a, args.cap)
        upto = args.upto if args.upto is not None else len(traj.bits)
        bits = traj.extend(upto)
        print("".join("1" if x else "0" for x in bits))
        if traj.exact:
            print(f"threshold {traj.threshold}")
            print(f"period {traj.period}")
            return EXIT_OK
        return EXIT_GUARD
    if args.relation == "universal":
        verdict = oracle_relation(Relation.UNIVERSAL, a, cap=args.cap)
        return _relation_exit(verdict, None, a)
    if len(args.inputs) != 2:
        raise _Usage(f"oracle {args.relation} takes two inputs")
    b = _load(args.inputs[1])
    verdict = oracle_relation(Relation(args.relation), a, b, cap=args.cap)
    if verdict.holds:
        print("holds")
        return EXIT_OK
    w = verdict.witness.value
    if args.relation == "equal" and not _accepts(a, w):
        a, b = b, a
    return _witness(w, a, b)


def cmd_bench(args) -> int:
    from .bench import build_suite, rows_to_csv, run_suite

    try:
        cases = build_suite(args.suite, args.seed)
    except KeyError as exc:
        raise _Usage(str(exc.args[0])) from None
    rows = run_suite(cases, jobs=args.jobs)
    _write(args.csv, rows_to_csv(rows, timing=not args.no_timing))
    bad = [r for r in rows if r["verdict"] not in ("ok", "agree")]
    return EXIT_FAIL if bad else EXIT_OK


# -- argument parsing --------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="unaryfa", description="Unary finite automata toolkit.")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("convert", help="convert between nfa and chrobak form")
    c.add_argument("input")
    c.add_argument("--to", choices=["nfa", "chrobak"], default="chrobak")
    c.add_argument("--normalize", action="store_true")
    c.add_argument("--determinize", action="store_true")
    c.add_argument("--guard", type=int, default=10**6)
    c.add_argument("-o", "--output", default="-")
    c.set_defaults(func=cmd_convert)

    c = sub.add_parser("complement", help="complement an unambiguous automaton")
    c.add_argument("input")
    c.add_argument("-o", "--output", default="-")
    c.set_defaults(func=cmd_complement)

    c = sub.add_parser("op", help="regular operation")
    c.add_argument(
        "name", choices=["intersect", "union", "symdiff", "star", "concat", "concat-bits", "disjoint-union"]
    )
    c.add_argument("inputs", nargs="+")
    c.add_argument("--guard", type=int, default=10**6)
    c.add_argument("-o", "--output", default="-")
    c.set_defaults(func=cmd_op)

    c = sub.add_parser("compare", help="subset or equality of two automata")
    c.add_argument("--relation", choices=["subset", "equal"], default="subset")
    c.add_argument("left")
    c.add_argument("right")
    c.set_defaults(func=cmd_compare)

    c = sub.add_parser("universal", help="does the automaton accept every length?")
    c.add_argument("input")
    c.add_argument("--mode", choices=["exact", "modular", "thm2"], default="thm2")
    c.set_defaults(func=cmd_universal)

    c = sub.add_parser("inclusion", help="subset test with an unambiguous right side")
    c.add_argument("left")
    c.add_argument("right")
    c.set_defaults(func=cmd_inclusion)

    c = sub.add_parser("ambiguity", help="check for two accepting runs on one length")
    c.add_argument("input")
    c.add_argument("--max-steps", type=int, default=10**6)
    c.set_defaults(func=cmd_ambiguity)

    c = sub.add_parser("eval", help="evaluate a formula over named automata")
    c.add_argument("formula")
    c.add_argument("--bind", action="append", default=[], metavar="NAME=FILE")
    c.add_argument("--allow-concat", action="store_true")
    c.add_argument("-o", "--output", default="-")
    c.set_defaults(func=cmd_eval)

    c = sub.add_parser("gen", help="hardness instance generators")
    c.add_argument("family", choices=["prop1", "formula", "concat-blowup"])
    c.add_argument("--cnf")
    c.add_argument("--m", type=int)
    c.add_argument("--three-occur", action="store_true", help="apply the 3-occurrence transform first")
    c.add_argument("--out-dir")
    c.add_argument("--manifest")
    c.add_argument("-o", "--output", default="-")
    c.set_defaults(func=cmd_gen)

    c = sub.add_parser("oracle", help="brute-force reference answers")
    c.add_argument("relation", choices=["subset", "equal", "universal", "bits"])
    c.add_argument("inputs", nargs="+")
    c.add_argument("--cap", type=int, default=10**5)
    c.add_argument("--upto", type=int)
    c.set_defaults(func=cmd_oracle)

    c = sub.add_parser("bench", help="run a benchmark suite")
    c.add_argument("--suite", required=True)
    c.add_argument("--csv", default="-")
    c.add_argument("--jobs", type=int, default=1)
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--no-timing", action="store_true", help="write 0 in time_ms for byte-identical reruns")
    c.set_defaults(func=cmd_bench)
    return p


_INPUT_ERRORS = (
    errors.FormatError,
    errors.AmbiguousInput,
    errors.NotThreeOccur,
    errors.StructureViolation,
    errors.ConcatDisallowed,
    errors.TooLarge,
    OSError,
    ValueError,
)
_GUARD_ERRORS = (errors.GuardExceeded, errors.Inexact, errors.NoPeriodInWindow, errors.RecursionOverflow)


def run(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except _Usage as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except _GUARD_ERRORS as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except _INPUT_ERRORS as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        witness = getattr(exc, "witness", None)
        if witness is not None:
            print(f"ambiguous at length {witness.value}", file=sys.stderr)
        return EXIT_INPUT


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
