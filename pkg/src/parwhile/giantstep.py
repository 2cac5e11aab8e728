"""Giant-step evaluation: run past release points for every possible
resumed state.

Yields carry continuations (state -> tree) instead of residual syntax.
Continuations are closures tagged with a structural key describing the
recipe they were built from; keys with equal value denote extensionally
equal functions and are used only to memoize equivalence checking, never
compared in place of probing.
"""

from __future__ import annotations

import itertools

from .bigstep import COOPERATIVE, PREEMPTIVE, SchedMode
from .lang import (
    Assign,
    Atomic,
    Await,
    If,
    Par,
    Seq,
    Skip,
    State,
    Stmt,
    While,
    eval_expr,
    sat,
    stmt_vars,
)
from .resumption import (
    Continuation,
    Delay,
    Plus,
    Res,
    Ret,
    Yield,
    YieldK,
    delay,
    now,
    plus,
    ret,
)


def eval_cont(s: Stmt, mode: SchedMode) -> Continuation:
    return Continuation(lambda sigma: eval_g(s, sigma, mode), ("eval", s, mode))


def _seq_after_body(loop: While, mode: SchedMode) -> Continuation:
    # continuation for a taken while-guard: run the body, then the loop.
    return Continuation(
        lambda sigma: evalseq_g(loop, eval_g(loop.body, sigma, mode), mode),
        ("loop", loop, mode),
    )


def eval_g(s: Stmt, sigma: State, mode: SchedMode = PREEMPTIVE) -> Res:
    if isinstance(s, Assign):
        return delay(ret(sigma.set(s.var, eval_expr(s.expr, sigma))))
    if isinstance(s, Skip):
        return ret(sigma)
    if isinstance(s, Seq):
        return evalseq_g(s.second, eval_g(s.first, sigma, mode), mode)
    if isinstance(s, If):
        branch = s.then if sat(s.guard, sigma) else s.els
        if mode is PREEMPTIVE:
            return delay(now(YieldK(eval_cont(branch, mode), sigma)))
        return delay(eval_g(branch, sigma, mode))
    if isinstance(s, While):
        if not sat(s.guard, sigma):
            return delay(ret(sigma))
        if mode is PREEMPTIVE:
            return delay(now(YieldK(_seq_after_body(s, mode), sigma)))
        return delay(evalseq_g(s, eval_g(s.body, sigma, mode), mode))
    if isinstance(s, Par):
        return plus(
            merge_r(eval_cont(s.right, mode), eval_g(s.left, sigma, mode), mode),
            merge_l(eval_cont(s.left, mode), eval_g(s.right, sigma, mode), mode),
        )
    if isinstance(s, Atomic):
        return close_g(eval_g(s.body, sigma, mode), mode)
    if isinstance(s, Await):
        if sat(s.guard, sigma):
            return delay(close_g(eval_g(s.body, sigma, mode), mode))
        return delay(now(YieldK(eval_cont(s, mode), sigma)))
    raise ValueError(f"cannot evaluate auxiliary form {s!r}")


def evalseq_g(s: Stmt, r: Res, mode: SchedMode = PREEMPTIVE) -> Res:
    def produce():
        node = r.force()
        if isinstance(node, Ret):
            if mode is PREEMPTIVE:
                return YieldK(eval_cont(s, mode), node.state)
            return eval_g(s, node.state, mode).force()
        if isinstance(node, Delay):
            return Delay(evalseq_g(s, node.rest, mode))
        if isinstance(node, Plus):
            return Plus(evalseq_g(s, node.left, mode), evalseq_g(s, node.right, mode))
        if isinstance(node, YieldK):
            k = node.cont
            lifted = Continuation(
                lambda sigma: evalseq_g(s, k(sigma), mode),
                ("seq-after", s, k.key, mode),
            )
            return YieldK(lifted, node.state)
        raise TypeError(f"evalseq_g over foreign node {node!r}")

    return Res(produce)


def merge_r(k: Continuation, r: Res, mode: SchedMode = PREEMPTIVE) -> Res:
    """Merge continuation k into r, r making the first step."""

    def produce():
        node = r.force()
        if isinstance(node, Ret):
            if mode is PREEMPTIVE:
                return YieldK(k, node.state)
            return k(node.state).force()
        if isinstance(node, Delay):
            return Delay(merge_r(k, node.rest, mode))
        if isinstance(node, Plus):
            return Plus(merge_r(k, node.left, mode), merge_r(k, node.right, mode))
        if isinstance(node, YieldK):
            k0 = node.cont
            both = Continuation(
                lambda sigma: plus(merge_r(k, k0(sigma), mode), merge_l(k0, k(sigma), mode)),
                ("merge-r", k.key, k0.key, mode),
            )
            return YieldK(both, node.state)
        raise TypeError(f"merge_r over foreign node {node!r}")

    return Res(produce)


def merge_l(k: Continuation, r: Res, mode: SchedMode = PREEMPTIVE) -> Res:
    """Merge continuation k into r with k on the left of the composition."""

    def produce():
        node = r.force()
        if isinstance(node, Ret):
            if mode is PREEMPTIVE:
                return YieldK(k, node.state)
            return k(node.state).force()
        if isinstance(node, Delay):
            return Delay(merge_l(k, node.rest, mode))
        if isinstance(node, Plus):
            return Plus(merge_l(k, node.left, mode), merge_l(k, node.right, mode))
        if isinstance(node, YieldK):
            k1 = node.cont
            both = Continuation(
                lambda sigma: plus(merge_r(k1, k(sigma), mode), merge_l(k, k1(sigma), mode)),
                ("merge-l", k.key, k1.key, mode),
            )
            return YieldK(both, node.state)
        raise TypeError(f"merge_l over foreign node {node!r}")

    return Res(produce)


def close_g(r: Res, mode: SchedMode = PREEMPTIVE) -> Res:
    """Close a continuation-carrying tree: re-enter each continuation at
    its own release state, with a unit delay."""

    def produce():
        node = r.force()
        if isinstance(node, Ret):
            return node
        if isinstance(node, Delay):
            return Delay(close_g(node.rest, mode))
        if isinstance(node, Plus):
            return Plus(close_g(node.left, mode), close_g(node.right, mode))
        if isinstance(node, YieldK):
            return Delay(close_g(node.cont(node.state), mode))
        raise TypeError(f"close_g over foreign node {node!r}")

    return Res(produce)


class YieldEncountered(Exception):
    """Raised when converting a tree assumed yield-free hits a yield."""


def flatten_yieldfree(r: Res) -> Res:
    """Convert a yield-free continuation-carrying tree to a plain tree.

    Total exactly on yield-free trees (e.g. anything produced by
    closing); forcing past a yield raises YieldEncountered.
    """

    def produce():
        node = r.force()
        if isinstance(node, Ret):
            return node
        if isinstance(node, Delay):
            return Delay(flatten_yieldfree(node.rest))
        if isinstance(node, Plus):
            return Plus(flatten_yieldfree(node.left), flatten_yieldfree(node.right))
        if isinstance(node, (YieldK, Yield)):
            raise YieldEncountered(f"yield at {node.state}")
        raise TypeError(f"flatten over foreign node {node!r}")

    return Res(produce)


PROBE_VALUES = (0, 1, 2, 3)
PROBE_CAP = 64


def default_probes(s: Stmt, init: State) -> list[State]:
    """Deterministic probe set: the program's variables over small
    values, capped, plus the initial state."""
    names = sorted(stmt_vars(s))
    states: list[State] = []
    for combo in itertools.product(PROBE_VALUES, repeat=len(names)):
        states.append(State(tuple(zip(names, combo))))
        if len(states) >= PROBE_CAP:
            break
    if init not in states:
        states.append(init)
    return states
