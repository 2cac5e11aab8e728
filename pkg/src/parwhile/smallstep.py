"""Reference small-step semantics: single-step reduction over extended
configurations, chained corecursively into maximal multi-step reduction.

A single reduction is justified by a finite, syntax-directed derivation;
`red` is therefore a plain recursive function.  The auxiliary forms
`ParL`/`ParR` mark which side of a parallel composition makes the first
step; `Suspend` exists only in cooperative mode, where it is the sole
explicit release point besides await.
"""

from __future__ import annotations

from functools import lru_cache

from .bigstep import COOPERATIVE, PREEMPTIVE, SchedMode
from .lang import (
    SKIP,
    Assign,
    Atomic,
    Await,
    If,
    Par,
    ParL,
    ParR,
    Seq,
    Skip,
    State,
    Stmt,
    Suspend,
    While,
    eval_expr,
    pretty,
    sat,
)
from .resumption import Continuation, Delay, Plus, Res, Ret, Yield, YieldK


class XRet:
    __slots__ = ("state",)

    def __init__(self, state: State):
        self.state = state


class XDelay:
    __slots__ = ("stmt", "state")

    def __init__(self, stmt: Stmt, state: State):
        self.stmt = stmt
        self.state = state


class XPlus:
    __slots__ = ("stmt0", "state0", "stmt1", "state1")

    def __init__(self, stmt0: Stmt, state0: State, stmt1: Stmt, state1: State):
        self.stmt0 = stmt0
        self.state0 = state0
        self.stmt1 = stmt1
        self.state1 = state1


class XYield:
    __slots__ = ("stmt", "state")

    def __init__(self, stmt: Stmt, state: State):
        self.stmt = stmt
        self.state = state


XCfg = XRet | XDelay | XPlus | XYield


def render_xcfg(c: XCfg) -> str:
    if isinstance(c, XRet):
        return f"ret {c.state}"
    if isinstance(c, XDelay):
        return f"δ ⟨{pretty(c.stmt)}⟩ {c.state}"
    if isinstance(c, XPlus):
        return (
            f"(⟨{pretty(c.stmt0)}⟩ {c.state0} + ⟨{pretty(c.stmt1)}⟩ {c.state1})"
        )
    if isinstance(c, XYield):
        return f"yield ⟨{pretty(c.stmt)}⟩ {c.state}"
    raise TypeError(f"unknown configuration {c!r}")


def red(s: Stmt, sigma: State, mode: SchedMode = PREEMPTIVE) -> XCfg:
    """One small step.  Total and deterministic on the mode's statement
    sublanguage; Suspend is cooperative-only."""
    if isinstance(s, Assign):
        return XDelay(SKIP, sigma.set(s.var, eval_expr(s.expr, sigma)))
    if isinstance(s, Skip):
        return XRet(sigma)
    if isinstance(s, Suspend):
        if mode is not COOPERATIVE:
            raise ValueError("suspend is not part of the preemptive language")
        return XYield(SKIP, sigma)
    if isinstance(s, Seq):
        c = red(s.first, sigma, mode)
        if isinstance(c, XRet):
            if mode is PREEMPTIVE:
                return XYield(s.second, c.state)
            return red(s.second, c.state, mode)
        if isinstance(c, XDelay):
            return XDelay(Seq(c.stmt, s.second), c.state)
        if isinstance(c, XPlus):
            return XPlus(
                Seq(c.stmt0, s.second), c.state0, Seq(c.stmt1, s.second), c.state1
            )
        if mode is COOPERATIVE and isinstance(c.stmt, Skip):
            # a cooperative yield with residual skip comes from suspend;
            # skip; s is indistinguishable from s here, so drop the skip
            # to match the big-step residuals syntactically.
            return XYield(s.second, c.state)
        return XYield(Seq(c.stmt, s.second), c.state)
    if isinstance(s, If):
        branch = s.then if sat(s.guard, sigma) else s.els
        if mode is PREEMPTIVE:
            # skip; s allows a control release before s starts.
            return XDelay(Seq(SKIP, branch), sigma)
        return XDelay(branch, sigma)
    if isinstance(s, While):
        if not sat(s.guard, sigma):
            return XDelay(SKIP, sigma)
        body_then_loop = Seq(s.body, s)
        if mode is PREEMPTIVE:
            return XDelay(Seq(SKIP, body_then_loop), sigma)
        return XDelay(body_then_loop, sigma)
    if isinstance(s, Par):
        return XPlus(ParL(s.left, s.right), sigma, ParR(s.left, s.right), sigma)
    if isinstance(s, ParL):
        c = red(s.left, sigma, mode)
        if isinstance(c, XRet):
            if mode is PREEMPTIVE:
                return XYield(s.right, c.state)
            return red(s.right, c.state, mode)
        if isinstance(c, XDelay):
            return XDelay(ParL(c.stmt, s.right), c.state)
        if isinstance(c, XPlus):
            return XPlus(
                ParL(c.stmt0, s.right), c.state0, ParL(c.stmt1, s.right), c.state1
            )
        return XYield(Par(c.stmt, s.right), c.state)
    if isinstance(s, ParR):
        c = red(s.right, sigma, mode)
        if isinstance(c, XRet):
            if mode is PREEMPTIVE:
                return XYield(s.left, c.state)
            return red(s.left, c.state, mode)
        if isinstance(c, XDelay):
            return XDelay(ParR(s.left, c.stmt), c.state)
        if isinstance(c, XPlus):
            return XPlus(
                ParR(s.left, c.stmt0), c.state0, ParR(s.left, c.stmt1), c.state1
            )
        return XYield(Par(s.left, c.stmt), c.state)
    if isinstance(s, Atomic):
        c = red(s.body, sigma, mode)
        if isinstance(c, XRet):
            return c
        if isinstance(c, XDelay):
            return XDelay(Atomic(c.stmt), c.state)
        if isinstance(c, XPlus):
            return XPlus(
                Atomic(c.stmt0), c.state0, Atomic(c.stmt1), c.state1
            )
        return XDelay(Atomic(c.stmt), c.state)
    if isinstance(s, Await):
        if sat(s.guard, sigma):
            return XDelay(Atomic(s.body), sigma)
        if mode is PREEMPTIVE:
            return XDelay(Seq(SKIP, s), sigma)
        return XDelay(Seq(Suspend(), s), sigma)
    raise TypeError(f"not a statement: {s!r}")


@lru_cache(maxsize=1 << 18)
def mmred(s: Stmt, sigma: State, mode: SchedMode = PREEMPTIVE) -> Res:
    """Maximal multi-step reduction: apply `red` as long as possible,
    treating ret and yield configurations as terminal.

    Cached per configuration, as eval_stmt is, so interleaving diamonds
    share subtrees.
    """

    def produce():
        c = red(s, sigma, mode)
        if isinstance(c, XRet):
            return Ret(c.state)
        if isinstance(c, XDelay):
            return Delay(mmred(c.stmt, c.state, mode))
        if isinstance(c, XPlus):
            return Plus(mmred(c.stmt0, c.state0, mode), mmred(c.stmt1, c.state1, mode))
        return Yield(c.stmt, c.state)

    return Res(produce)


@lru_cache(maxsize=1 << 18)
def gmmred(s: Stmt, sigma: State, mode: SchedMode = PREEMPTIVE) -> Res:
    """The variation of maximal multi-step reduction that also reduces
    under yields, producing a continuation-carrying tree."""

    def produce():
        c = red(s, sigma, mode)
        if isinstance(c, XRet):
            return Ret(c.state)
        if isinstance(c, XDelay):
            return Delay(gmmred(c.stmt, c.state, mode))
        if isinstance(c, XPlus):
            return Plus(gmmred(c.stmt0, c.state0, mode), gmmred(c.stmt1, c.state1, mode))
        resumed = c.stmt
        k = Continuation(
            lambda resume: gmmred(resumed, resume, mode), ("gmm", resumed, mode)
        )
        return YieldK(k, c.state)

    return Res(produce)
