"""Trace-based semantics: linear runs obtained by resolving every
scheduling choice with explicit oracles.

A trace is a computation tree without choice nodes.  Where big-step
evaluation of a parallel composition branches, trace evaluation consults
a :class:`Schedule` and applies only the chosen rule.  Giant-step traces
additionally consult a :class:`ResumeOracle` for the single state in
which control is regained after each release.

Reifying the nondeterminism as oracle inputs keeps evaluation a
deterministic function; the relational reading is recovered by
quantifying tests over oracles.  Any oracle pair produces a valid trace
(a path of the corresponding tree), so evaluation stays total.
"""

from __future__ import annotations

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
    parse_state,
    sat,
)
from .resumption import (
    Delay,
    Node,
    Plus,
    Res,
    Ret,
    Yield,
    YieldK,
    YieldR,
    delay,
    now,
    ret,
    yield_stmt,
)


class Schedule:
    """A single-consumer stream of L/R choices with a read cursor.

    Finite schedules answer L once exhausted.  A cyclic schedule repeats
    its choice string forever.
    """

    __slots__ = ("choices", "cyclic", "cursor")

    def __init__(self, choices: str = "", cyclic: bool = False):
        if any(c not in "LR" for c in choices):
            raise ValueError(f"schedule may only contain L and R, got {choices!r}")
        if cyclic and not choices:
            raise ValueError("a cyclic schedule needs a non-empty choice string")
        self.choices = choices
        self.cyclic = cyclic
        self.cursor = 0

    @staticmethod
    def parse(literal: str) -> "Schedule":
        """Parse a schedule literal: a string over {L,R}, with an
        optional `*` suffix meaning repeat forever (`LR*`)."""
        lit = literal.strip()
        if lit.endswith("*"):
            return Schedule(lit[:-1], cyclic=True)
        return Schedule(lit)

    def next(self) -> str:
        if self.cursor < len(self.choices):
            c = self.choices[self.cursor]
            self.cursor += 1
            return c
        if self.cyclic:
            c = self.choices[self.cursor % len(self.choices)]
            self.cursor += 1
            return c
        return "L"


class ResumeOracle:
    """A single-consumer sequence of resume states.

    When a giant-step trace reaches a release point, the next oracle
    state is the state control is regained in.  An exhausted oracle
    reuses the release state itself, which always closes cleanly.
    """

    __slots__ = ("states", "cursor")

    def __init__(self, states: list[State] | tuple[State, ...] = ()):
        self.states = tuple(states)
        self.cursor = 0

    @staticmethod
    def parse(literal: str) -> "ResumeOracle":
        """Parse a `;`-separated sequence of state literals."""
        lit = literal.strip()
        if not lit:
            return ResumeOracle()
        return ResumeOracle([parse_state(part) for part in lit.split(";")])

    def next(self, release: State) -> State:
        if self.cursor < len(self.states):
            s = self.states[self.cursor]
            self.cursor += 1
            return s
        return release


# ---------------------------------------------------------------------------
# Big-step traces


def trace_eval(s: Stmt, sigma: State, sched: Schedule, mode: SchedMode = PREEMPTIVE) -> Res:
    """The trace of s from sigma under sched.

    Evaluation follows the big-step rules with the parallel rule split
    in two: the schedule picks which component makes the first step.
    Choices are consumed lazily, in trace order, as the choice points
    are forced.
    """
    if isinstance(s, Assign):
        return delay(ret(sigma.set(s.var, eval_expr(s.expr, sigma))))
    if isinstance(s, Skip):
        return ret(sigma)
    if isinstance(s, Seq):
        return tseq(s.second, trace_eval(s.first, sigma, sched, mode), sched, mode)
    if isinstance(s, If):
        branch = s.then if sat(s.guard, sigma) else s.els
        if mode is PREEMPTIVE:
            return delay(yield_stmt(branch, sigma))
        return delay(trace_eval(branch, sigma, sched, mode))
    if isinstance(s, While):
        if not sat(s.guard, sigma):
            return delay(ret(sigma))
        if mode is PREEMPTIVE:
            return delay(yield_stmt(Seq(s.body, s), sigma))
        return delay(tseq(s, trace_eval(s.body, sigma, sched, mode), sched, mode))
    if isinstance(s, Par):
        def choose():
            if sched.next() == "L":
                return tparr(s.right, trace_eval(s.left, sigma, sched, mode), sched, mode).force()
            return tparl(s.left, trace_eval(s.right, sigma, sched, mode), sched, mode).force()

        return Res(choose)
    if isinstance(s, Atomic):
        return close_trace(trace_eval(s.body, sigma, sched, mode), sched, mode)
    if isinstance(s, Await):
        if sat(s.guard, sigma):
            return delay(close_trace(trace_eval(s.body, sigma, sched, mode), sched, mode))
        return delay(yield_stmt(s, sigma))
    raise ValueError(f"cannot evaluate auxiliary form {s!r}")


def tseq(s: Stmt, t: Res, sched: Schedule, mode: SchedMode) -> Res:
    def produce():
        node = t.force()
        if isinstance(node, Ret):
            if mode is PREEMPTIVE:
                return Yield(s, node.state)
            return trace_eval(s, node.state, sched, mode).force()
        if isinstance(node, Delay):
            return Delay(tseq(s, node.rest, sched, mode))
        if isinstance(node, Yield):
            return Yield(Seq(node.stmt, s), node.state)
        raise TypeError(f"tseq over non-trace node {node!r}")

    return Res(produce)


def tparr(s: Stmt, t: Res, sched: Schedule, mode: SchedMode) -> Res:
    """s runs in parallel on the right; t makes the first step."""

    def produce():
        node = t.force()
        if isinstance(node, Ret):
            if mode is PREEMPTIVE:
                return Yield(s, node.state)
            return trace_eval(s, node.state, sched, mode).force()
        if isinstance(node, Delay):
            return Delay(tparr(s, node.rest, sched, mode))
        if isinstance(node, Yield):
            return Yield(Par(node.stmt, s), node.state)
        raise TypeError(f"tparr over non-trace node {node!r}")

    return Res(produce)


def tparl(s: Stmt, t: Res, sched: Schedule, mode: SchedMode) -> Res:
    """s runs in parallel on the left; t makes the first step."""

    def produce():
        node = t.force()
        if isinstance(node, Ret):
            if mode is PREEMPTIVE:
                return Yield(s, node.state)
            return trace_eval(s, node.state, sched, mode).force()
        if isinstance(node, Delay):
            return Delay(tparl(s, node.rest, sched, mode))
        if isinstance(node, Yield):
            return Yield(Par(s, node.stmt), node.state)
        raise TypeError(f"tparl over non-trace node {node!r}")

    return Res(produce)


def close_trace(t: Res, sched: Schedule, mode: SchedMode = PREEMPTIVE) -> Res:
    """Close a trace: re-enter trace evaluation of each residual at the
    release state, with a unit delay per stitched yield."""

    def produce():
        node = t.force()
        if isinstance(node, Ret):
            return node
        if isinstance(node, Delay):
            return Delay(close_trace(node.rest, sched, mode))
        if isinstance(node, Yield):
            return Delay(
                close_trace(trace_eval(node.stmt, node.state, sched, mode), sched, mode)
            )
        raise TypeError(f"close_trace over non-trace node {node!r}")

    return Res(produce)


# ---------------------------------------------------------------------------
# Giant-step traces


def trace_eval_g(
    s: Stmt,
    sigma: State,
    sched: Schedule,
    resume: ResumeOracle,
    mode: SchedMode = PREEMPTIVE,
) -> Res:
    """The linear giant-step run of s from sigma under both oracles.

    Implemented by pathifying the giant-step tree: the schedule resolves
    each choice, and every release point is re-entered at the single
    oracle-chosen resume state.
    """
    from .giantstep import eval_g

    return pathify_g(eval_g(s, sigma, mode), sched, resume)


def pathify_g(r: Res, sched: Schedule, resume: ResumeOracle) -> Res:
    def produce():
        node = r.force()
        if isinstance(node, Ret):
            return node
        if isinstance(node, Delay):
            return Delay(pathify_g(node.rest, sched, resume))
        if isinstance(node, Plus):
            chosen = node.left if sched.next() == "L" else node.right
            return pathify_g(chosen, sched, resume).force()
        if isinstance(node, YieldK):
            prime = resume.next(node.state)
            return YieldR(prime, pathify_g(node.cont(prime), sched, resume), node.state)
        raise TypeError(f"pathify_g over foreign node {node!r}")

    return Res(produce)


# ---------------------------------------------------------------------------
# Validation by projection


def is_path_of(t: Res, r: Res, depth: int) -> bool:
    """True iff, to `depth` constructor layers, the trace t matches the
    tree r with each choice node of r resolved to either child.

    Choice resolution is free: it consumes no depth, since the trace has
    no corresponding constructor.
    """
    if depth <= 0:
        return True
    nt = t.force()
    nr = r.force()
    if isinstance(nr, Plus):
        return is_path_of(t, nr.left, depth) or is_path_of(t, nr.right, depth)
    if isinstance(nt, Ret):
        return isinstance(nr, Ret) and nt.state == nr.state
    if isinstance(nt, Delay):
        return isinstance(nr, Delay) and is_path_of(nt.rest, nr.rest, depth - 1)
    if isinstance(nt, Yield):
        return isinstance(nr, Yield) and nt.stmt == nr.stmt and nt.state == nr.state
    raise TypeError(f"is_path_of over non-trace node {nt!r}")


def is_path_of_g(t: Res, r: Res, depth: int) -> bool:
    """Projection check for giant-step traces: at each release point the
    trace's recorded resume state selects the continuation branch."""
    if depth <= 0:
        return True
    nt = t.force()
    nr = r.force()
    if isinstance(nr, Plus):
        return is_path_of_g(t, nr.left, depth) or is_path_of_g(t, nr.right, depth)
    if isinstance(nt, Ret):
        return isinstance(nr, Ret) and nt.state == nr.state
    if isinstance(nt, Delay):
        return isinstance(nr, Delay) and is_path_of_g(nt.rest, nr.rest, depth - 1)
    if isinstance(nt, YieldR):
        return (
            isinstance(nr, YieldK)
            and nt.state == nr.state
            and is_path_of_g(nt.rest, nr.cont(nt.resume), depth - 1)
        )
    raise TypeError(f"is_path_of_g over non-trace node {nt!r}")


class StuckClosing(Exception):
    """Closing a giant-step trace is defined only at release points whose
    resume state coincides with the release state."""

    def __init__(self, release: State, resume: State):
        super().__init__(
            f"cannot close: control released at {release} but regained at {resume}"
        )
        self.release = release
        self.resume = resume


def close_trace_g(t: Res) -> Res:
    """Partial closing of a giant-step trace; forcing past a mismatched
    release point raises StuckClosing."""

    def produce():
        node = t.force()
        if isinstance(node, Ret):
            return node
        if isinstance(node, Delay):
            return Delay(close_trace_g(node.rest))
        if isinstance(node, YieldR):
            if node.resume != node.state:
                raise StuckClosing(node.state, node.resume)
            return Delay(close_trace_g(node.rest))
        raise TypeError(f"close_trace_g over non-trace node {node!r}")

    return Res(produce)


# ---------------------------------------------------------------------------
# Path enumeration (completeness oracle)


def trace_items(t: Res, depth: int) -> tuple:
    """Linearize a trace to `depth` layers: a run of 'δ' items ending in
    a terminal ('ret', σ), ('yield', s, σ) or '…' at the cut-off."""
    items = []
    while depth > 0:
        node = t.force()
        if isinstance(node, Delay):
            items.append("δ")
            t = node.rest
            depth -= 1
            continue
        if isinstance(node, Ret):
            items.append(("ret", node.state))
            return tuple(items)
        if isinstance(node, Yield):
            items.append(("yield", node.stmt, node.state))
            return tuple(items)
        raise TypeError(f"trace_items over non-trace node {node!r}")
    items.append("…")
    return tuple(items)


def enumerate_paths(r: Res, depth: int) -> list[tuple[str, tuple]]:
    """All choice-resolved paths of r, as (schedule string, linearized
    items) pairs, with choice resolution free of depth.

    The completeness oracle: trace evaluation under each returned
    schedule must reproduce the corresponding items.
    """
    out: list[tuple[str, tuple]] = []

    def go(r: Res, d: int, sched: str, items: list) -> None:
        if d <= 0:
            out.append((sched, tuple(items + ["…"])))
            return
        node = r.force()
        if isinstance(node, Plus):
            go(node.left, d, sched + "L", items)
            go(node.right, d, sched + "R", items)
        elif isinstance(node, Delay):
            go(node.rest, d - 1, sched, items + ["δ"])
        elif isinstance(node, Ret):
            out.append((sched, tuple(items + [("ret", node.state)])))
        elif isinstance(node, Yield):
            out.append((sched, tuple(items + [("yield", node.stmt, node.state)])))
        else:
            raise TypeError(f"enumerate_paths over foreign node {node!r}")

    go(r, depth, "", [])
    return out
