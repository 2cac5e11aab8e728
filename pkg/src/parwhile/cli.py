"""Command-line front end: evaluate, render, compare and differentially
test the four semantics.

Exit codes: 0 for success / Holds, 1 for Fails, 2 for Unknown, 3 for
usage, parse or type errors.  With --quiet nothing is printed and the
exit code is the only output channel.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from .bigstep import COOPERATIVE, PREEMPTIVE, SchedMode, close, eval_stmt
from .corpus import gen_corpus
from .equiv import Verdict, strong_bisim, strong_bisim_g, weak_bisim
from .giantstep import close_g, default_probes, eval_g, flatten_yieldfree
from .lang import (
    ParseError,
    State,
    Stmt,
    assigned_vars,
    parse,
    parse_state,
    pretty,
    read_vars,
)
from .resumption import prefix, prefix_g, render, to_record
from .smallstep import gmmred, mmred
from .tracesem import (
    ResumeOracle,
    Schedule,
    is_path_of,
    trace_eval,
    trace_eval_g,
)

EXIT_HOLDS = 0
EXIT_FAILS = 1
EXIT_UNKNOWN = 2
EXIT_USAGE = 3


class CliError(Exception):
    pass


def _mode(name: str) -> SchedMode:
    return PREEMPTIVE if name == "preempt" else COOPERATIVE


def _load_program(args) -> Stmt:
    if args.expr is not None:
        source = args.expr
    elif args.file is not None:
        source = Path(args.file).read_text()
    else:
        raise CliError("provide a program with -e or --file")
    return parse(source)


def _parse_probes(literal: str | None, s: Stmt, init: State) -> list[State]:
    if literal is None or literal == "default":
        return default_probes(s, init)
    return [parse_state(part) for part in literal.split(";")]


def _warn_uninitialized(s: Stmt, init: State, quiet: bool) -> None:
    suspect = read_vars(s) - set(init.names()) - assigned_vars(s)
    if suspect and not quiet:
        names = ", ".join(sorted(suspect))
        print(
            f"warning: possibly uninitialized variable(s) {names} read as 0",
            file=sys.stderr,
        )


def _emit(ft, fmt: str, quiet: bool) -> None:
    if quiet:
        return
    if fmt == "structured":
        print(json.dumps(to_record(ft), sort_keys=True))
    else:
        print(render(ft))


def _verdict_exit(v: Verdict, quiet: bool) -> int:
    if not quiet:
        print(v.render())
    if v.status == "holds":
        return EXIT_HOLDS
    if v.status == "fails":
        return EXIT_FAILS
    return EXIT_UNKNOWN


def cmd_eval(args) -> int:
    s = _load_program(args)
    init = parse_state(args.init)
    mode = _mode(args.mode)
    _warn_uninitialized(s, init, args.quiet)
    if args.sem == "big":
        ft = prefix(eval_stmt(s, init, mode), args.depth)
    elif args.sem == "giant":
        probes = _parse_probes(args.probes, s, init)
        ft = prefix_g(eval_g(s, init, mode), args.depth, probes)
    elif args.sem == "small":
        if args.probes is not None:
            probes = _parse_probes(args.probes, s, init)
            ft = prefix_g(gmmred(s, init, mode), args.depth, probes)
        else:
            ft = prefix(mmred(s, init, mode), args.depth)
    else:  # trace
        sched = Schedule.parse(args.schedule or "")
        if args.resume is not None:
            resume = ResumeOracle.parse(args.resume)
            ft = prefix(trace_eval_g(s, init, sched, resume, mode), args.depth)
        else:
            ft = prefix(trace_eval(s, init, sched, mode), args.depth)
    _emit(ft, args.format, args.quiet)
    return EXIT_HOLDS


def _resumption_for(sem: str, s: Stmt, init: State, mode: SchedMode):
    if sem == "big":
        return eval_stmt(s, init, mode)
    if sem == "small":
        return mmred(s, init, mode)
    raise CliError(f"no plain resumption for semantics {sem!r}")


def cmd_compare(args) -> int:
    s = _load_program(args)
    init = parse_state(args.init)
    mode = _mode(args.mode)
    _warn_uninitialized(s, init, args.quiet)
    pair = {args.left, args.right}
    if pair <= {"big", "small"}:
        r1 = _resumption_for(args.left, s, init, mode)
        r2 = _resumption_for(args.right, s, init, mode)
        if args.equivalence == "weak":
            v = weak_bisim(r1, r2, args.depth, args.fuel)
        else:
            v = strong_bisim(r1, r2, args.depth)
        return _verdict_exit(v, args.quiet)
    if pair == {"giant", "small"}:
        probes = _parse_probes(args.probes, s, init)
        v = strong_bisim_g(
            eval_g(s, init, mode), gmmred(s, init, mode), args.depth, probes
        )
        return _verdict_exit(v, args.quiet)
    if "trace" in pair:
        other = (pair - {"trace"}).pop() if pair != {"trace"} else "big"
        if other == "giant":
            raise CliError("compare trace against big or small, not giant")
        sched = Schedule.parse(args.schedule or "")
        t = trace_eval(s, init, sched, mode)
        r = _resumption_for(other, s, init, mode)
        ok = is_path_of(t, r, args.depth)
        v = Verdict("holds" if ok else "fails", args.depth, reason="" if ok else "trace is not a path")
        return _verdict_exit(v, args.quiet)
    if pair == {"big", "giant"}:
        # comparable only when both sides are yield-free, i.e. under closing
        v = strong_bisim(
            close(eval_stmt(s, init, mode), mode),
            flatten_yieldfree(close_g(eval_g(s, init, mode), mode)),
            args.depth,
        )
        return _verdict_exit(v, args.quiet)
    raise CliError(f"unsupported comparison {args.left} vs {args.right}")


def cmd_bisim(args) -> int:
    left = parse(args.left_program)
    right = parse(args.right_program)
    init = parse_state(args.init)
    mode = _mode(args.mode)
    if args.sem == "giant":
        probes = sorted(
            set(default_probes(left, init)) | set(default_probes(right, init)),
            key=lambda st: st.bindings,
        )
        if args.probes is not None:
            probes = _parse_probes(args.probes, left, init)
        v = strong_bisim_g(
            eval_g(left, init, mode), eval_g(right, init, mode), args.depth, probes
        )
        return _verdict_exit(v, args.quiet)
    if args.sem == "big":
        r1, r2 = eval_stmt(left, init, mode), eval_stmt(right, init, mode)
    else:
        r1, r2 = mmred(left, init, mode), mmred(right, init, mode)
    if args.equivalence == "weak":
        v = weak_bisim(r1, r2, args.depth, args.fuel)
    else:
        v = strong_bisim(r1, r2, args.depth)
    return _verdict_exit(v, args.quiet)


def cmd_corpus(args) -> int:
    from .report import CaseResult, write_csv, write_figures

    cases = gen_corpus(args.seed, args.count, args.max_size)
    rows: list[CaseResult] = []
    worst = "holds"
    rank = {"holds": 0, "unknown": 1, "fails": 2}
    for i, (s, init) in enumerate(cases):
        for check in ("big-vs-small", "giant-vs-small", "weak-reflexive"):
            t0 = time.perf_counter()
            if check == "big-vs-small":
                v = strong_bisim(
                    eval_stmt(s, init), mmred(s, init), args.depth
                )
            elif check == "giant-vs-small":
                v = strong_bisim_g(
                    eval_g(s, init),
                    gmmred(s, init),
                    min(args.depth, 40),
                    default_probes(s, init),
                )
            else:
                r = eval_stmt(s, init)
                v = weak_bisim(r, r, args.depth, args.fuel)
            dt = time.perf_counter() - t0
            rows.append(
                CaseResult(i, pretty(s), str(init), check, v.status, args.depth, dt)
            )
            if rank[v.status] > rank[worst]:
                worst = v.status
    out = Path(args.out)
    write_csv(rows, out)
    figures = write_figures(rows, Path(args.report_dir))
    if not args.quiet:
        holds = sum(1 for r in rows if r.verdict == "holds")
        print(f"{holds}/{len(rows)} checks hold over {len(cases)} programs")
        print(f"results: {out}")
        for f in figures:
            print(f"figure: {f}")
    return {"holds": EXIT_HOLDS, "fails": EXIT_FAILS, "unknown": EXIT_UNKNOWN}[worst]


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="parwhile",
        description="semantics workbench for a concurrent imperative language",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, program: bool = True):
        if program:
            p.add_argument("-e", "--expr", help="program text")
            p.add_argument("--file", help="read the program from a file")
        p.add_argument("--init", default="{}", help="initial state literal, e.g. '{x=0}'")
        p.add_argument("--mode", choices=("preempt", "coop"), default="preempt")
        p.add_argument("--quiet", action="store_true")

    p = sub.add_parser("eval", help="evaluate and render a program")
    common(p)
    p.add_argument("--sem", choices=("big", "giant", "small", "trace"), default="big")
    p.add_argument("--depth", type=int, default=8)
    p.add_argument("--probes", help="';'-separated state literals, or 'default'")
    p.add_argument("--schedule", help="schedule literal over {L,R}, optional '*' suffix")
    p.add_argument("--resume", help="';'-separated resume state literals")
    p.add_argument("--format", choices=("text", "structured"), default="text")
    p.set_defaults(fn=cmd_eval)

    p = sub.add_parser("compare", help="compare two semantics on one program")
    common(p)
    p.add_argument("--left", choices=("big", "giant", "small", "trace"), required=True)
    p.add_argument("--right", choices=("big", "giant", "small", "trace"), required=True)
    p.add_argument("--equivalence", choices=("strong", "weak"), default="strong")
    p.add_argument("--depth", type=int, default=60)
    p.add_argument("--fuel", type=int, default=1000)
    p.add_argument("--probes", help="';'-separated state literals, or 'default'")
    p.add_argument("--schedule", help="schedule for the trace side")
    p.set_defaults(fn=cmd_compare)

    p = sub.add_parser("bisim", help="compare two programs under one semantics")
    p.add_argument("left_program")
    p.add_argument("right_program")
    common(p, program=False)
    p.add_argument("--sem", choices=("big", "giant", "small"), default="big")
    p.add_argument("--equivalence", choices=("strong", "weak"), default="strong")
    p.add_argument("--depth", type=int, default=60)
    p.add_argument("--fuel", type=int, default=1000)
    p.add_argument("--probes", help="';'-separated state literals")
    p.set_defaults(fn=cmd_bisim)

    p = sub.add_parser("corpus", help="generate a corpus and run the differential suite")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--count", type=int, default=100)
    p.add_argument("--max-size", type=int, default=12)
    p.add_argument("--depth", type=int, default=60)
    p.add_argument("--fuel", type=int, default=1000)
    p.add_argument("--out", default="corpus_results.csv")
    p.add_argument("--report-dir", default="corpus_report")
    p.add_argument("--quiet", action="store_true")
    p.set_defaults(fn=cmd_corpus)

    return ap


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code not in (0, None) else 0
    try:
        return args.fn(args)
    except (ParseError, CliError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
