"""Acceptance suite: one test per criterion, each printing a single
pass/fail line (bypassing capture) in addition to the pytest outcome."""

import itertools
import sys
import time

from parwhile.bigstep import COOPERATIVE, close, eval_stmt
from parwhile.corpus import gen_corpus
from parwhile.equiv import diverges, strong_bisim, strong_bisim_g, weak_bisim
from parwhile.giantstep import close_g, default_probes, eval_g, flatten_yieldfree
from parwhile.lang import Atomic, Await, Par, Seq, parse, parse_state
from parwhile.resumption import (
    FYield,
    count_nodes,
    delta_inf,
    delta_n,
    prefix,
    prefix_g,
    render,
    ret,
)
from parwhile.smallstep import gmmred, mmred
from parwhile.tracesem import Schedule, enumerate_paths, is_path_of, trace_eval, trace_items

S0 = parse_state("{x=0}")
INIT_STATES = [parse_state("{}"), parse_state("{x=1}"), parse_state("{x=2, y=1}")]


def report(n: int, ok: bool, desc: str) -> None:
    status = "PASS" if ok else "FAIL"
    print(f"criterion {n:2d}: {status} - {desc}", file=sys.__stdout__, flush=True)


def full_corpus():
    return gen_corpus(42, 500, 12)


def test_criterion_1_golden_par_example():
    t0 = time.perf_counter()
    r = eval_stmt(parse("x := 1 || (x := x+2; x := x+2)"), S0)
    text = render(prefix(r, 6))
    elapsed = time.perf_counter() - t0
    ok = text == (
        "(δ yield ⟨x := x+2; x := x+2⟩ {x=1} + δ yield ⟨x := 1 || x := x+2⟩ {x=2})"
    ) and elapsed < 0.001
    report(1, ok, f"golden interleaving example, {elapsed * 1000:.3f} ms")
    assert ok


def test_criterion_2_golden_atomic_example():
    r = eval_stmt(parse("atomic { x := 1 || (x := x+2; x := x+2) }"), S0)
    text = render(prefix(r, 12))
    ok = text == "(δ^5 ret {x=5} + δ^2 (δ^3 ret {x=3} + δ^3 ret {x=1}))"
    report(2, ok, "golden atomic example")
    assert ok


def test_criterion_3_golden_await_example():
    r = eval_stmt(parse("(await x = 0 then x := 1) || x := 2"), S0)
    open_ok = render(prefix(r, 8)) == (
        "(δ^2 yield ⟨x := 2⟩ {x=1} + δ yield ⟨await x = 0 then x := 1⟩ {x=2})"
    )
    wrapped = eval_stmt(parse("atomic { (await x = 0 then x := 1) || x := 2 }"), S0)
    node = wrapped.force()
    left_ok = render(prefix(node.left, 8)) == "δ^4 ret {x=2}"
    right_ok = diverges(node.right, 1000)
    ok = open_ok and left_ok and right_ok
    report(3, ok, "golden await example, atomic wrap left exact / right diverges")
    assert ok


def test_criterion_4_big_small_agreement():
    t0 = time.perf_counter()
    bad = 0
    for s, _ in full_corpus():
        for init in INIT_STATES:
            if not strong_bisim(eval_stmt(s, init), mmred(s, init), 60).holds:
                bad += 1
    elapsed = time.perf_counter() - t0
    ok = bad == 0 and elapsed <= 60
    report(4, ok, f"big/small strong bisim on 500x3 cases, {elapsed:.1f} s, {bad} mismatches")
    assert ok


def test_criterion_5_giant_small_agreement():
    bad = 0
    for s, init in full_corpus()[:200]:
        probes = default_probes(s, init)
        if not strong_bisim_g(eval_g(s, init), gmmred(s, init), 40, probes).holds:
            bad += 1
    report(5, bad == 0, f"giant/small strong bisim on 200 cases, {bad} mismatches")
    assert bad == 0


def test_criterion_6_atomic_coherence():
    bad = 0
    for s, init in full_corpus()[:200]:
        wrapped = Atomic(s)
        v = strong_bisim(
            eval_stmt(wrapped, init), flatten_yieldfree(eval_g(wrapped, init)), 60
        )
        if not v.holds:
            bad += 1
    report(6, bad == 0, f"big/giant coherence on atomic wrappings, {bad} mismatches")
    assert bad == 0


def test_criterion_7_trace_soundness_completeness():
    schedules = [""] + [
        "".join(p) for k in range(1, 7) for p in itertools.product("LR", repeat=k)
    ]
    bad_sound = bad_complete = 0
    for s, init in full_corpus()[:200]:
        r = eval_stmt(s, init)
        for ss in schedules:
            if not is_path_of(trace_eval(s, init, Schedule(ss)), r, 60):
                bad_sound += 1
        for ss, items in enumerate_paths(r, 6):
            if trace_items(trace_eval(s, init, Schedule(ss)), 6) != items:
                bad_complete += 1
    ok = bad_sound == 0 and bad_complete == 0
    report(7, ok, f"trace soundness ({bad_sound} bad) and completeness ({bad_complete} bad)")
    assert ok


def test_criterion_8_weak_bisim_laws():
    refl_bad = 0
    for s, init in full_corpus():
        r = eval_stmt(s, init)
        if not weak_bisim(r, r, 100, 1000).holds:
            refl_bad += 1
    r = eval_stmt(parse("x := 1 || y := 2"), parse_state("{}"))
    pad_ok = all(weak_bisim(delta_n(n, r), r, 100, 1000).holds for n in range(1, 21))
    sens_ok = True
    for depth in (1, 10, 100, 1000):
        for fuel in (1, 10, 100, 1000):
            if weak_bisim(ret(S0), delta_inf(), depth, fuel).holds:
                sens_ok = False
    ok = refl_bad == 0 and pad_ok and sens_ok
    report(8, ok, f"weak bisim: reflexivity ({refl_bad} bad), padding, termination sensitivity")
    assert ok


def test_criterion_9_closing_eliminates_yields():
    bad = 0
    for s, init in full_corpus():
        if count_nodes(prefix(close(eval_stmt(s, init)), 60), FYield) != 0:
            bad += 1
        probes = default_probes(s, init)
        ft = prefix_g(close_g(eval_g(s, init)), 60, probes)
        if count_nodes(ft, FYield) != 0:
            bad += 1
    report(9, bad == 0, f"close/close_g yield-free to depth 60, {bad} violations")
    assert bad == 0


def _await_rooted(s):
    if isinstance(s, Await):
        return True
    if isinstance(s, Seq):
        return _await_rooted(s.first)
    if isinstance(s, Par):
        return _await_rooted(s.left) or _await_rooted(s.right)
    return False


def _yield_stmts(r, depth):
    """Residual statements of every yield within `depth` layers.

    Walks the lazy cells directly with a visited-at-depth memo: the
    evaluator caches make interleaving diamonds shared cells, so this
    stays polynomial where a materialized prefix would be exponential.
    """
    from parwhile.resumption import Delay, Plus, Yield

    out = set()
    seen = {}
    pins = []
    stack = [(r, depth)]
    while stack:
        cell, d = stack.pop()
        if d <= 0 or seen.get(id(cell), -1) >= d:
            continue
        seen[id(cell)] = d
        pins.append(cell)
        node = cell.force()
        if isinstance(node, Yield):
            out.add(node.stmt)
        elif isinstance(node, Delay):
            stack.append((node.rest, d - 1))
        elif isinstance(node, Plus):
            stack.append((node.left, d - 1))
            stack.append((node.right, d - 1))
    return out


def test_criterion_10_cooperative_mode():
    bad_residual = bad_agree = 0
    for s, init in full_corpus()[:200]:
        for resid in _yield_stmts(eval_stmt(s, init, COOPERATIVE), 60):
            if not _await_rooted(resid):
                bad_residual += 1
        for st in INIT_STATES:
            v = strong_bisim(
                eval_stmt(s, st, COOPERATIVE), mmred(s, st, COOPERATIVE), 60
            )
            if not v.holds:
                bad_agree += 1
    ok = bad_residual == 0 and bad_agree == 0
    report(
        10,
        ok,
        f"cooperative yields await-rooted ({bad_residual} bad), eval/mmred agree ({bad_agree} bad)",
    )
    assert ok
