"""Big-step evaluation producing resumption trees.

Evaluation runs a statement up to its nearest control-release points and
collects every schedule into one tree.  Two scheduling interpretations
share the code: preemptive (control may be released at guard tests and
at composition midpoints) and cooperative (only await releases control).
The rule deltas between the two are confined to the ret-cases of the
sequential/parallel extensions and the if/while cases.

Every assignment and guard test contributes exactly one delay, which is
what makes evaluation deterministic and divergence productive.
"""

from __future__ import annotations

import enum
from functools import lru_cache

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
)
from .resumption import Delay, Plus, Res, Ret, Yield, delay, plus, ret, yield_stmt


class SchedMode(enum.Enum):
    PREEMPTIVE = "preemptive"
    COOPERATIVE = "cooperative"


PREEMPTIVE = SchedMode.PREEMPTIVE
COOPERATIVE = SchedMode.COOPERATIVE


@lru_cache(maxsize=1 << 18)
def eval_stmt(s: Stmt, sigma: State, mode: SchedMode = PREEMPTIVE) -> Res:
    """The resumption of s started in sigma; total, divergence shows up
    as an infinite delay path in the tree.

    Evaluation is pure, so results are cached per (s, sigma, mode);
    interleavings that reach the same configuration share one cell,
    which keeps diamond-shaped choice trees polynomial to traverse.
    """
    if isinstance(s, Assign):
        return delay(ret(sigma.set(s.var, eval_expr(s.expr, sigma))))
    if isinstance(s, Skip):
        return ret(sigma)
    if isinstance(s, Seq):
        return evalseq(s.second, eval_stmt(s.first, sigma, mode), mode)
    if isinstance(s, If):
        branch = s.then if sat(s.guard, sigma) else s.els
        if mode is PREEMPTIVE:
            return delay(yield_stmt(branch, sigma))
        return delay(eval_stmt(branch, sigma, mode))
    if isinstance(s, While):
        if not sat(s.guard, sigma):
            return delay(ret(sigma))
        if mode is PREEMPTIVE:
            return delay(yield_stmt(Seq(s.body, s), sigma))
        return delay(evalseq(s, eval_stmt(s.body, sigma, mode), mode))
    if isinstance(s, Par):
        return plus(
            evalpar_r(s.right, eval_stmt(s.left, sigma, mode), mode),
            evalpar_l(s.left, eval_stmt(s.right, sigma, mode), mode),
        )
    if isinstance(s, Atomic):
        return close(eval_stmt(s.body, sigma, mode), mode)
    if isinstance(s, Await):
        if sat(s.guard, sigma):
            return delay(close(eval_stmt(s.body, sigma, mode), mode))
        return delay(yield_stmt(s, sigma))
    raise ValueError(f"cannot evaluate auxiliary form {s!r}")


@lru_cache(maxsize=1 << 18)
def evalseq(s: Stmt, r: Res, mode: SchedMode = PREEMPTIVE) -> Res:
    """Run s after r: the coinductive prefix closure of evaluation.

    Preemptively, the midpoint of a sequential composition is a release
    point; cooperatively, evaluation of s chains on directly.

    Cached per (s, cell, mode) — cells compare by identity — so a shared
    subtree gets one wrapper instead of one per path to it.
    """

    def produce():
        node = r.force()
        if isinstance(node, Ret):
            if mode is PREEMPTIVE:
                return Yield(s, node.state)
            return eval_stmt(s, node.state, mode).force()
        if isinstance(node, Delay):
            return Delay(evalseq(s, node.rest, mode))
        if isinstance(node, Plus):
            return Plus(evalseq(s, node.left, mode), evalseq(s, node.right, mode))
        if isinstance(node, Yield):
            return Yield(Seq(node.stmt, s), node.state)
        raise TypeError(f"evalseq over foreign node {node!r}")

    return Res(produce)


@lru_cache(maxsize=1 << 18)
def evalpar_r(s: Stmt, r: Res, mode: SchedMode = PREEMPTIVE) -> Res:
    """Run s in parallel with r, r making the first step."""

    def produce():
        node = r.force()
        if isinstance(node, Ret):
            if mode is PREEMPTIVE:
                return Yield(s, node.state)
            return eval_stmt(s, node.state, mode).force()
        if isinstance(node, Delay):
            return Delay(evalpar_r(s, node.rest, mode))
        if isinstance(node, Plus):
            return Plus(evalpar_r(s, node.left, mode), evalpar_r(s, node.right, mode))
        if isinstance(node, Yield):
            return Yield(Par(node.stmt, s), node.state)
        raise TypeError(f"evalpar_r over foreign node {node!r}")

    return Res(produce)


@lru_cache(maxsize=1 << 18)
def evalpar_l(s: Stmt, r: Res, mode: SchedMode = PREEMPTIVE) -> Res:
    """Run s in parallel with r, r making the first step, s on the left."""

    def produce():
        node = r.force()
        if isinstance(node, Ret):
            if mode is PREEMPTIVE:
                return Yield(s, node.state)
            return eval_stmt(s, node.state, mode).force()
        if isinstance(node, Delay):
            return Delay(evalpar_l(s, node.rest, mode))
        if isinstance(node, Plus):
            return Plus(evalpar_l(s, node.left, mode), evalpar_l(s, node.right, mode))
        if isinstance(node, Yield):
            return Yield(Par(s, node.stmt), node.state)
        raise TypeError(f"evalpar_l over foreign node {node!r}")

    return Res(produce)


@lru_cache(maxsize=1 << 18)
def close(r: Res, mode: SchedMode = PREEMPTIVE) -> Res:
    """Stitch every release point by re-entering evaluation of the
    residual; each stitched yield leaves a delay behind."""

    def produce():
        node = r.force()
        if isinstance(node, Ret):
            return node
        if isinstance(node, Delay):
            return Delay(close(node.rest, mode))
        if isinstance(node, Plus):
            return Plus(close(node.left, mode), close(node.right, mode))
        if isinstance(node, Yield):
            return Delay(close(eval_stmt(node.stmt, node.state, mode), mode))
        raise TypeError(f"close over foreign node {node!r}")

    return Res(produce)
