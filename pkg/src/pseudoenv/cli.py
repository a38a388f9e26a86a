"""Command-line harness: ``run``, ``fuzz``, ``bench``, ``plot`` and ``trace``.

Ops scripts start with a family line and then hold one command per line::

    family lines
    insert a 2 0
    insert b -2 2
    query 0
    dump

Blank lines and ``#`` comments are ignored.  Parse errors exit with status 2,
errors raised by an operation exit with status 1; both name the line.
"""
from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass
from typing import Sequence, TextIO

from . import envelope_tree as et
from .dynamic_envelope import DynamicEnvelope
from .errors import EnvelopeError
from .geometry import FAMILIES, make_pseudoline, parse_rational

ARITY = {"insert": 3, "delete": 1, "query": 1, "dump": 0, "validate": 0}


class ScriptError(Exception):
    def __init__(self, lineno: int, message: str):
        self.lineno = lineno
        super().__init__(f"line {lineno}: {message}")


@dataclass(frozen=True)
class Command:
    lineno: int
    op: str
    args: tuple


@dataclass(frozen=True)
class Script:
    family: type
    commands: tuple[Command, ...]


def parse_script(text: str) -> Script:
    family = None
    commands = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        words = raw.split("#", 1)[0].split()
        if not words:
            continue
        op, args = words[0], words[1:]
        if family is None:
            if op != "family" or len(args) != 1:
                raise ScriptError(lineno, "expected 'family lines' or 'family parabolas' first")
            if args[0] not in FAMILIES:
                raise ScriptError(lineno, f"unknown family {args[0]!r}")
            family = FAMILIES[args[0]]
            continue
        if op not in ARITY:
            raise ScriptError(lineno, f"unknown command {op!r}")
        if len(args) != ARITY[op]:
            raise ScriptError(lineno, f"{op} takes {ARITY[op]} argument(s), got {len(args)}")
        try:
            if op == "insert":
                args = [args[0], parse_rational(args[1]), parse_rational(args[2])]
            elif op == "query":
                args = [parse_rational(args[0])]
        except ValueError as exc:
            raise ScriptError(lineno, str(exc)) from None
        commands.append(Command(lineno, op, tuple(args)))
    if family is None:
        raise ScriptError(1, "missing family line")
    return Script(family, tuple(commands))


def load_script(path: str) -> Script:
    with open(path, encoding="utf-8") as fh:
        return parse_script(fh.read())


class OpError(Exception):
    def __init__(self, cmd: Command, exc: Exception):
        self.cmd = cmd
        super().__init__(f"line {cmd.lineno}: {cmd.op}: {type(exc).__name__}: {exc}")


def execute(script: Script, out: TextIO | None = None) -> DynamicEnvelope:
    """Run every command; output lines go to ``out`` (if given)."""
    s = DynamicEnvelope(family=script.family)
    for cmd in script.commands:
        try:
            text = _apply(s, script.family, cmd)
        except (EnvelopeError, AssertionError) as exc:
            raise OpError(cmd, exc) from exc
        if text is not None and out is not None:
            out.write(text + "\n")
    return s


def _apply(s: DynamicEnvelope, family: type, cmd: Command) -> str | None:
    if cmd.op == "insert":
        s.insert(make_pseudoline(family, *cmd.args))
    elif cmd.op == "delete":
        s.delete(cmd.args[0])
    elif cmd.op == "query":
        return str(s.ray_shoot(cmd.args[0]).id)
    elif cmd.op == "dump":
        return et.dump(s.envelope)
    else:
        s.validate()
        return "ok"
    return None


def _load_and_run(path: str, out: TextIO | None) -> DynamicEnvelope:
    return execute(load_script(path), out)


def cmd_run(args) -> int:
    _load_and_run(args.file, sys.stdout)
    return 0


def cmd_fuzz(args) -> int:
    from .fuzzing import FAMILIES as FUZZ_FAMILIES, FuzzFailure, dynamic_case, merge_case

    merges = args.cases if args.merges is None else args.merges
    try:
        if args.only:
            fam_name, kind, case = args.only.split(":")
            family = FAMILIES[fam_name]
            if kind == "dynamic":
                dynamic_case(args.seed, family, int(case), args.max_n, args.max_ops)
            else:
                merge_case(args.seed, family, int(case), args.max_size)
            print(f"ok: {args.only}")
            return 0
        ops = 0
        for family in FUZZ_FAMILIES:
            for case in range(args.cases):
                ops += dynamic_case(args.seed, family, case, args.max_n, args.max_ops)
            for case in range(merges):
                merge_case(args.seed, family, case, args.max_size)
    except FuzzFailure as exc:
        print(f"FAIL {exc.repro}", file=sys.stderr)
        print(f"rerun: pseudoenv fuzz --seed {args.seed} --max-n {args.max_n} "
              f"--only {exc.case_key}", file=sys.stderr)
        if exc.script and args.repro_out:
            with open(args.repro_out, "w", encoding="utf-8") as fh:
                fh.write("\n".join(exc.script) + "\n")
            print(f"script: {args.repro_out}", file=sys.stderr)
        return 1
    print(f"ok: seed={args.seed} {args.cases} dynamic cases ({ops} ops, n <= {args.max_n}) "
          f"and {merges} merges per family")
    return 0


def cmd_bench(args) -> int:
    from .bench import run_bench, to_csv

    sizes = [int(x) for x in args.sizes.split(",") if x]
    text = to_csv(run_bench(sizes, args.trials, args.seed, FAMILIES[args.family]))
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def _write(path: str, text: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def cmd_plot(args) -> int:
    from .svg import envelope_svg

    s = _load_and_run(args.file, None)
    _write(args.out, envelope_svg(s.segments()))
    return 0


def cmd_trace(args) -> int:
    from .svg import trace_svg
    from .tentative_search import SearchTrace, find_intersection

    left = _load_and_run(args.left, None)
    right = _load_and_run(args.right, None)
    trace = SearchTrace()
    find_intersection(left.envelope, right.envelope, trace=trace)
    rows = [("Step", "u", "v", "uStack", "vStack", "Case")] + trace.table()
    _write(args.out, "".join("\t".join(r) + "\n" for r in rows))
    if args.svg:
        _write(args.svg, trace_svg(trace))
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="pseudoenv", description="Dynamic lower envelopes of pseudo-lines.")
    sub = p.add_subparsers(dest="command", required=True)

    r = sub.add_parser("run", help="execute an ops script")
    r.add_argument("file")
    r.set_defaults(func=cmd_run)

    f = sub.add_parser("fuzz", help="differential testing against the brute-force oracle")
    f.add_argument("--seed", type=int, default=0)
    f.add_argument("--cases", type=int, default=1000, help="dynamic cases per family")
    f.add_argument("--max-n", type=int, default=128)
    f.add_argument("--max-ops", type=int, default=200)
    f.add_argument("--merges", type=int, default=None, help="merge cases per family (default: --cases)")
    f.add_argument("--max-size", type=int, default=512)
    f.add_argument("--only", metavar="FAMILY:KIND:CASE", help="rerun a single case")
    f.add_argument("--repro-out", metavar="PATH", help="write a failing dynamic case as an ops script")
    f.set_defaults(func=cmd_fuzz)

    b = sub.add_parser("bench", help="primitive counts per operation, as CSV")
    b.add_argument("--sizes", default="256,1024,4096,16384")
    b.add_argument("--trials", type=int, default=1000)
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--family", choices=sorted(FAMILIES), default="lines")
    b.add_argument("--out")
    b.set_defaults(func=cmd_bench)

    pl = sub.add_parser("plot", help="SVG of the final envelope of an ops script")
    pl.add_argument("file")
    pl.add_argument("out")
    pl.set_defaults(func=cmd_plot)

    t = sub.add_parser("trace", help="intersection-search trace of two ops scripts' envelopes")
    t.add_argument("left")
    t.add_argument("right")
    t.add_argument("out")
    t.add_argument("--svg", metavar="PATH")
    t.set_defaults(func=cmd_trace)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ScriptError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 2
    except OpError as exc:
        print(str(exc), file=sys.stderr)
        return 1
    except EnvelopeError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
