"""Lazy, possibly infinite computation trees and their bounded views.

A computation tree node is one of:

* ``Ret(state)`` — the computation terminated;
* ``Delay(rest)`` — one internal step, then ``rest``;
* ``Plus(left, right)`` — a binary scheduling choice;
* ``Yield(stmt, state)`` — control released, a residual statement waits;
* ``YieldK(cont, state)`` — control released, a continuation (state ->
  tree) describes every possible resumption;
* ``YieldR(resume, rest, state)`` — the linear-trace variant: control is
  regained in the single recorded state ``resume``.

Trees are built from memoizing lazy cells (:class:`Res`): the first
forcing runs a producer closure once, later forcings return the cached
node with the same child handles.  Cyclic trees such as the forever-
delaying tree are tied with self-referential producers.

Bounded observation materializes a tree into a finite :class:`FiniteTree`
whose leaves within the bound are exact and whose cut-off points are
``Pruned``.  Continuations are only ever opened at an explicit finite
set of probe states.
"""

from __future__ import annotations

import sys
import threading
from dataclasses import dataclass
from typing import Callable, Optional

from .lang import State, Stmt, pretty

# Deep delay chains (depth-1000 observations and their structural
# comparisons) need more Python stack than the default.
if sys.getrecursionlimit() < 100_000:
    sys.setrecursionlimit(100_000)


# ---------------------------------------------------------------------------
# Nodes and lazy cells


class Ret:
    __slots__ = ("state",)

    def __init__(self, state: State):
        self.state = state


class Delay:
    __slots__ = ("rest",)

    def __init__(self, rest: "Res"):
        self.rest = rest


class Plus:
    __slots__ = ("left", "right")

    def __init__(self, left: "Res", right: "Res"):
        self.left = left
        self.right = right


class Yield:
    __slots__ = ("stmt", "state")

    def __init__(self, stmt: Stmt, state: State):
        self.stmt = stmt
        self.state = state


class YieldK:
    __slots__ = ("cont", "state")

    def __init__(self, cont: "Continuation", state: State):
        self.cont = cont
        self.state = state


class YieldR:
    __slots__ = ("resume", "rest", "state")

    def __init__(self, resume: State, rest: "Res", state: State):
        self.resume = resume
        self.rest = rest
        self.state = state


Node = Ret | Delay | Plus | Yield | YieldK | YieldR

# One reentrant lock serializes first forcings; producers may force other
# cells while running, hence reentrancy.  Forcing an already-memoized
# cell never takes the lock.
_FORCE_LOCK = threading.RLock()


class Res:
    """A memoizing lazy cell holding one tree node."""

    __slots__ = ("_producer", "_node")

    def __init__(self, producer: Callable[[], Node]):
        self._producer = producer
        self._node = None

    def force(self) -> Node:
        node = self._node
        if node is None:
            with _FORCE_LOCK:
                node = self._node
                if node is None:
                    node = self._producer()
                    self._node = node
                    self._producer = None
        return node


def now(node: Node) -> Res:
    """A cell whose node is already known."""
    r = Res.__new__(Res)
    r._producer = None
    r._node = node
    return r


def ret(state: State) -> Res:
    return now(Ret(state))


def delay(rest: Res) -> Res:
    return now(Delay(rest))


def plus(left: Res, right: Res) -> Res:
    return now(Plus(left, right))


def yield_stmt(stmt: Stmt, state: State) -> Res:
    return now(Yield(stmt, state))


def delta_inf() -> Res:
    """The forever-delaying tree, tied into a one-node cycle."""
    r = Res(lambda: Delay(r))
    return r


def delta_n(n: int, rest: Res) -> Res:
    for _ in range(n):
        rest = delay(rest)
    return rest


class Continuation:
    """A total function from states to trees, with a structural key.

    The key identifies the recipe the continuation was built from; equal
    keys mean extensionally equal continuations.  Keys are used for
    memoization only — equivalence checks always apply continuations to
    probe states.
    """

    __slots__ = ("fn", "key", "_cache")

    def __init__(self, fn: Callable[[State], Res], key: tuple):
        self.fn = fn
        self.key = key
        self._cache: dict[State, Res] = {}

    def __call__(self, sigma: State) -> Res:
        r = self._cache.get(sigma)
        if r is None:
            r = self.fn(sigma)
            self._cache[sigma] = r
        return r


# ---------------------------------------------------------------------------
# Finite materialization


@dataclass(frozen=True)
class FRet:
    state: State


@dataclass(frozen=True)
class FDelay:
    child: "FiniteTree"


@dataclass(frozen=True)
class FPlus:
    left: "FiniteTree"
    right: "FiniteTree"


@dataclass(frozen=True)
class FYield:
    stmt: Stmt
    state: State


@dataclass(frozen=True)
class FYieldK:
    state: State
    probes: tuple[tuple[State, "FiniteTree"], ...]


@dataclass(frozen=True)
class FYieldR:
    state: State
    resume: State
    child: "FiniteTree"


@dataclass(frozen=True)
class FPruned:
    pass


FiniteTree = FRet | FDelay | FPlus | FYield | FYieldK | FYieldR | FPruned

PRUNED = FPruned()


def prefix(r: Res, depth: int, probes: Optional[list[State]] = None) -> FiniteTree:
    """Materialize r down to `depth` constructor layers.

    Nodes at distance `depth` from the root become ``Pruned``.  A
    ``YieldK`` node opens its continuation at each probe state; the
    probe children sit one layer below the yield, like ordinary
    children.
    """
    if depth <= 0:
        return PRUNED
    node = r.force()
    if isinstance(node, Ret):
        return FRet(node.state)
    if isinstance(node, Delay):
        return FDelay(prefix(node.rest, depth - 1, probes))
    if isinstance(node, Plus):
        return FPlus(
            prefix(node.left, depth - 1, probes),
            prefix(node.right, depth - 1, probes),
        )
    if isinstance(node, Yield):
        return FYield(node.stmt, node.state)
    if isinstance(node, YieldK):
        if not probes:
            raise ValueError("materializing a continuation node needs a non-empty probe set")
        return FYieldK(
            node.state,
            tuple((p, prefix(node.cont(p), depth - 1, probes)) for p in probes),
        )
    if isinstance(node, YieldR):
        return FYieldR(node.state, node.resume, prefix(node.rest, depth - 1, probes))
    raise TypeError(f"unknown node {node!r}")


def prefix_g(r: Res, depth: int, probes: list[State]) -> FiniteTree:
    """`prefix` for continuation-carrying trees; probes must be non-empty
    whenever depth allows a yield to be opened."""
    if depth > 0 and not probes:
        raise ValueError("prefix_g needs a non-empty probe set")
    return prefix(r, depth, probes)


def count_nodes(ft: FiniteTree, kind: Optional[type] = None) -> int:
    """Number of nodes in ft, optionally of one node class."""
    n = 1 if kind is None or isinstance(ft, kind) else 0
    if isinstance(ft, FDelay):
        n += count_nodes(ft.child, kind)
    elif isinstance(ft, FPlus):
        n += count_nodes(ft.left, kind) + count_nodes(ft.right, kind)
    elif isinstance(ft, FYieldK):
        n += sum(count_nodes(c, kind) for _, c in ft.probes)
    elif isinstance(ft, FYieldR):
        n += count_nodes(ft.child, kind)
    return n


def prune_to(ft: FiniteTree, depth: int) -> FiniteTree:
    """Re-prune a materialized tree to a smaller depth."""
    if depth <= 0:
        return PRUNED
    if isinstance(ft, FDelay):
        return FDelay(prune_to(ft.child, depth - 1))
    if isinstance(ft, FPlus):
        return FPlus(prune_to(ft.left, depth - 1), prune_to(ft.right, depth - 1))
    if isinstance(ft, FYieldK):
        return FYieldK(ft.state, tuple((p, prune_to(c, depth - 1)) for p, c in ft.probes))
    if isinstance(ft, FYieldR):
        return FYieldR(ft.state, ft.resume, prune_to(ft.child, depth - 1))
    return ft


# ---------------------------------------------------------------------------
# Rendering


def render(ft: FiniteTree) -> str:
    """Bit-stable text rendering used by the CLI and golden tests.

    Runs of two or more delays compress to `δ^k`; a single delay prints
    as `δ`.
    """
    delays = 0
    while isinstance(ft, FDelay):
        delays += 1
        ft = ft.child
    head = "" if delays == 0 else ("δ " if delays == 1 else f"δ^{delays} ")
    if isinstance(ft, FRet):
        return f"{head}ret {ft.state}"
    if isinstance(ft, FPlus):
        return f"{head}({render(ft.left)} + {render(ft.right)})"
    if isinstance(ft, FYield):
        return f"{head}yield ⟨{pretty(ft.stmt)}⟩ {ft.state}"
    if isinstance(ft, FYieldK):
        entries = "; ".join(f"σ′={p} ↦ {render(c)}" for p, c in ft.probes)
        return f"{head}yield {ft.state} [{entries}]"
    if isinstance(ft, FYieldR):
        return f"{head}yield {ft.state} [σ′={ft.resume} ↦ {render(ft.child)}]"
    if isinstance(ft, FPruned):
        return f"{head}…"
    raise TypeError(f"unknown finite tree {ft!r}")


def to_record(ft: FiniteTree) -> dict:
    """Structured (JSON-ready) form of a materialized tree."""
    if isinstance(ft, FRet):
        return {"kind": "ret", "state": dict(ft.state.bindings)}
    if isinstance(ft, FDelay):
        return {"kind": "delay", "children": [to_record(ft.child)]}
    if isinstance(ft, FPlus):
        return {"kind": "plus", "children": [to_record(ft.left), to_record(ft.right)]}
    if isinstance(ft, FYield):
        return {"kind": "yield", "stmt": pretty(ft.stmt), "state": dict(ft.state.bindings)}
    if isinstance(ft, FYieldK):
        children = []
        for p, c in ft.probes:
            rec = to_record(c)
            rec["probe"] = dict(p.bindings)
            children.append(rec)
        return {"kind": "yield", "state": dict(ft.state.bindings), "children": children}
    if isinstance(ft, FYieldR):
        rec = to_record(ft.child)
        rec["probe"] = dict(ft.resume.bindings)
        return {"kind": "yield", "state": dict(ft.state.bindings), "children": [rec]}
    if isinstance(ft, FPruned):
        return {"kind": "pruned"}
    raise TypeError(f"unknown finite tree {ft!r}")
