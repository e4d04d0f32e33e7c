"""Command-line interface: ``zx3 <command> ...``.

Exit status: 0 on success or Equal, 1 on Unequal or a failed check, 2 on
errors (bad input, size cap exceeded).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Sequence

from . import __version__
from .arith import Verdict, mat_equal_up_to_scalar
from .diagram import DiagramError, load, serialize, to_json
from .semantics import SizeCapError, interpret

EXIT_OK, EXIT_UNEQUAL, EXIT_ERROR = 0, 1, 2


def _read(path: str):
    text = sys.stdin.read() if path == "-" else Path(path).read_text(encoding="utf-8")
    return load(text)


def _cmd_interpret(args) -> int:
    m = interpret(_read(args.file))
    print(json.dumps(m.to_json()))
    return EXIT_OK


def _cmd_normalize(args) -> int:
    from .pipeline import normalize

    nf = normalize(_read(args.file), check=args.check)
    if args.json:
        print(json.dumps(nf.to_json()))
        return EXIT_OK
    print(f"{nf.kind} ({nf.k} -> {nf.l})")
    if nf.rgslc is not None:
        print(nf.rgslc.diagram)
    if args.check:
        print("check: every stage agrees with the matrix oracle")
    return EXIT_OK


def _cmd_eq(args) -> int:
    from .pipeline import EqVerdict, decide_equal

    v = decide_equal(_read(args.file1), _read(args.file2), check=args.check)
    print(v.value)
    return EXIT_UNEQUAL if v is EqVerdict.UNEQUAL else EXIT_OK


def _cmd_soundness(args) -> int:
    from .rules import builtin_rules, rule, verify_rule

    rules = [rule(args.rule)] if args.rule else builtin_rules()
    failed = 0
    for r in rules:
        rep = verify_rule(r)
        status = "sound" if rep.all_sound else f"{len(rep.counterexamples)} counterexample(s)"
        extra = f", {rep.both_zero} both-zero scalar" if rep.both_zero else ""
        print(f"{r.name:4s} {rep.instances_checked:5d} instances  {status}{extra}")
        for b, shape, v in rep.counterexamples[:5]:
            bind = ", ".join(f"{k}={p}" for k, p in b.items())
            print(f"      {bind} shape={shape}: {v.value}")
        failed += not rep.all_sound
    return EXIT_UNEQUAL if failed else EXIT_OK


def _cmd_clifford1(args) -> int:
    from .clifford1 import closure_sgh, compose_nf, enumerate_nf, identity_nf, in_R, inverse_nf, table

    if args.enumerate:
        for c, m in enumerate_nf():
            rows = "; ".join(" ".join(str(m[i, j]) for j in range(3)) for i in range(3))
            mark = " R" if in_R(c) else ""
            print(f"{c}{mark}  [{rows}]")
        return EXIT_OK
    closure, depth = closure_sgh()
    enumerate_nf()
    els = table()
    inv_ok = all(compose_nf(c, inverse_nf(c)) == identity_nf() for c in els)
    print(f"closure of <S,H>: {len(closure)} classes, word length <= {depth}")
    print("normal forms biject onto the closure: yes")
    print(f"inverses: {'ok' if inv_ok else 'FAILED'}")
    return EXIT_OK if inv_ok and len(closure) == 216 else EXIT_UNEQUAL


def _cmd_tableau(args) -> int:
    from .diagram import bend
    from .tableau import ZERO, canonicalize, diagram_to_tableau

    d = _read(args.file)
    t = diagram_to_tableau(bend(d) if d.inputs else d)
    if t is ZERO:
        print("ZERO")
        return EXIT_OK
    t = canonicalize(t)
    if args.json:
        print(json.dumps(t.to_json()))
    else:
        print(t)
    return EXIT_OK


def _cmd_random(args) -> int:
    from .pipeline import random_stabilizer_diagram

    d = random_stabilizer_diagram(args.wires, args.gates, args.seed, args.inputs, args.outputs)
    sys.stdout.write(json.dumps(to_json(d)) + "\n" if args.json else serialize(d))
    return EXIT_OK


def _cmd_selftest(args) -> int:
    from .pipeline import EqVerdict, decide_equal, random_pair

    bad = 0
    tally = {v: 0 for v in EqVerdict}
    for i in range(args.trials):
        d1, d2, _ = random_pair(args.seed + i)
        v = decide_equal(d1, d2)
        o = mat_equal_up_to_scalar(interpret(d1), interpret(d2))
        want = {Verdict.EQUAL_UP_TO_SCALAR: EqVerdict.EQUAL, Verdict.BOTH_ZERO: EqVerdict.ZERO_EQUIV}.get(o, EqVerdict.UNEQUAL)
        tally[v] += 1
        if v is not want:
            bad += 1
            print(f"seed {args.seed + i}: decided {v.value}, oracle {o.value}")
    summary = ", ".join(f"{v.value}={n}" for v, n in tally.items())
    print(f"{args.trials} pairs, {bad} disagreement(s); {summary}")
    return EXIT_UNEQUAL if bad else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="zx3", description="Exact qutrit stabilizer ZX-calculus engine.")
    p.add_argument("--version", action="version", version=f"zx3 {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("interpret", help="print the exact matrix of a diagram as JSON")
    s.add_argument("file")
    s.set_defaults(func=_cmd_interpret)

    s = sub.add_parser("normalize", help="reduced GS-LC normal form")
    s.add_argument("file")
    s.add_argument("--check", action="store_true", help="compare every stage with the matrix oracle")
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=_cmd_normalize)

    s = sub.add_parser("eq", help="decide equality up to a nonzero scalar")
    s.add_argument("file1")
    s.add_argument("file2")
    s.add_argument("--check", action="store_true")
    s.set_defaults(func=_cmd_eq)

    s = sub.add_parser("soundness", help="check the rewrite rules against the oracle")
    s.add_argument("--rule")
    s.set_defaults(func=_cmd_soundness)

    s = sub.add_parser("clifford1", help="single-qutrit Clifford group tables")
    g = s.add_mutually_exclusive_group(required=True)
    g.add_argument("--enumerate", action="store_true")
    g.add_argument("--check", action="store_true")
    s.set_defaults(func=_cmd_clifford1)

    s = sub.add_parser("tableau", help="canonical stabilizer tableau, or ZERO")
    s.add_argument("file")
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=_cmd_tableau)

    s = sub.add_parser("random", help="seeded random stabilizer diagram")
    s.add_argument("--wires", type=int, required=True)
    s.add_argument("--gates", type=int, required=True)
    s.add_argument("--seed", type=int, required=True)
    s.add_argument("--inputs", type=int)
    s.add_argument("--outputs", type=int)
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=_cmd_random)

    s = sub.add_parser("selftest", help="decide random pairs and compare with the oracle")
    s.add_argument("--trials", type=int, default=200)
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(func=_cmd_selftest)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (DiagramError, SizeCapError, OSError, ValueError) as exc:
        print(f"zx3: error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
