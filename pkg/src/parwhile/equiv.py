"""Bounded, constructive equivalence checks for computation trees.

Every check returns a three-valued :class:`Verdict`: Holds (to the
requested depth), Fails (with a replayable counterexample path) or
Unknown (some finite budget ran out).  The split between Fails and
Unknown matters: divergence cannot be refuted by finite observation, so
budget exhaustion is never reported as a refutation.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .lang import State, Stmt, pretty
from .resumption import (
    Continuation,
    Delay,
    Node,
    Plus,
    Res,
    Ret,
    Yield,
    YieldK,
    now,
)

HOLDS = "holds"
FAILS = "fails"
UNKNOWN = "unknown"

# Path steps: ("δ",), ("+", "L"|"R"), ("probe", state), ("conv",)


@dataclass
class Verdict:
    status: str
    depth: int
    path: tuple = ()
    reason: str = ""
    budget: str = ""

    @property
    def holds(self) -> bool:
        return self.status == HOLDS

    def render(self) -> str:
        if self.status == HOLDS:
            return f"HOLDS(depth={self.depth})"
        if self.status == FAILS:
            return f"FAILS(path={render_path(self.path)}, reason={self.reason})"
        return f"UNKNOWN(budget={self.budget}, at={render_path(self.path)})"


def render_path(path: tuple) -> str:
    parts = []
    for step in path:
        if step[0] == "δ":
            parts.append("δ")
        elif step[0] == "+":
            parts.append(f"+{step[1]}")
        elif step[0] == "probe":
            parts.append(f"[{step[1]}]")
        elif step[0] == "conv":
            parts.append("↓")
    return "".join(parts)


def _kind(node: Node) -> str:
    return type(node).__name__


# ---------------------------------------------------------------------------
# Strong bisimilarity


def strong_bisim(r1: Res, r2: Res, depth: int) -> Verdict:
    """Constructor-exact comparison to `depth` layers.

    Never Unknown: the only budget is the depth, and reaching it counts
    as holding to that depth.
    """
    # Evaluation caches make shared subtrees the same cell, so trees are
    # really DAGs; skip cell pairs already scheduled at >= this depth.
    # `seen` pins the cells, keeping the ids valid for the whole run.
    seen: dict[tuple[int, int], tuple[int, Res, Res]] = {}
    stack: list[tuple[Res, Res, int, tuple]] = [(r1, r2, depth, ())]
    while stack:
        a, b, d, path = stack.pop()
        if d <= 0 or a is b:
            continue
        key = (id(a), id(b))
        hit = seen.get(key)
        if hit is not None and hit[0] >= d:
            continue
        seen[key] = (d, a, b)
        na, nb = a.force(), b.force()
        if type(na) is not type(nb):
            return Verdict(FAILS, depth, path, f"{_kind(na)} vs {_kind(nb)}")
        if isinstance(na, Ret):
            if na.state != nb.state:
                return Verdict(FAILS, depth, path, f"ret {na.state} vs ret {nb.state}")
        elif isinstance(na, Delay):
            stack.append((na.rest, nb.rest, d - 1, path + (("δ",),)))
        elif isinstance(na, Plus):
            stack.append((na.right, nb.right, d - 1, path + (("+", "R"),)))
            stack.append((na.left, nb.left, d - 1, path + (("+", "L"),)))
        elif isinstance(na, Yield):
            if na.state != nb.state or na.stmt != nb.stmt:
                return Verdict(
                    FAILS,
                    depth,
                    path,
                    f"yield ⟨{pretty(na.stmt)}⟩ {na.state} vs ⟨{pretty(nb.stmt)}⟩ {nb.state}",
                )
        else:
            return Verdict(FAILS, depth, path, f"unexpected node {_kind(na)}")
    return Verdict(HOLDS, depth)


def strong_bisim_g(r1: Res, r2: Res, depth: int, probes: list[State]) -> Verdict:
    """Strong bisimilarity for continuation-carrying trees.

    Yield nodes must suspend in equal states and their continuations
    must stay bisimilar at every probe state.  Pairs of continuation
    applications already under scrutiny (identified by the structural
    recipe keys) are taken as given, which is the usual coinductive
    closure and keeps loops from exploding.
    """
    if not probes:
        raise ValueError("strong_bisim_g needs a non-empty probe set")
    proven: dict[tuple, int] = {}
    in_progress: set[tuple] = set()

    def walk(a: Res, b: Res, d: int, path: tuple) -> Verdict | None:
        if d <= 0:
            return None
        na, nb = a.force(), b.force()
        if type(na) is not type(nb):
            return Verdict(FAILS, depth, path, f"{_kind(na)} vs {_kind(nb)}")
        if isinstance(na, Ret):
            if na.state != nb.state:
                return Verdict(FAILS, depth, path, f"ret {na.state} vs ret {nb.state}")
            return None
        if isinstance(na, Delay):
            return walk(na.rest, nb.rest, d - 1, path + (("δ",),))
        if isinstance(na, Plus):
            bad = walk(na.left, nb.left, d - 1, path + (("+", "L"),))
            if bad is not None:
                return bad
            return walk(na.right, nb.right, d - 1, path + (("+", "R"),))
        if isinstance(na, YieldK):
            if na.state != nb.state:
                return Verdict(
                    FAILS, depth, path, f"yield at {na.state} vs yield at {nb.state}"
                )
            k1, k2 = na.cont, nb.cont
            for p in probes:
                key = (k1.key, k2.key, p)
                if proven.get(key, -1) >= d - 1 or key in in_progress:
                    continue
                in_progress.add(key)
                try:
                    bad = walk(k1(p), k2(p), d - 1, path + (("probe", p),))
                finally:
                    in_progress.discard(key)
                if bad is not None:
                    return bad
                if proven.get(key, -1) < d - 1:
                    proven[key] = d - 1
            return None
        return Verdict(FAILS, depth, path, f"unexpected node {_kind(na)}")

    bad = walk(r1, r2, depth, ())
    return bad if bad is not None else Verdict(HOLDS, depth)


# ---------------------------------------------------------------------------
# Convergence and divergence


@dataclass
class Convergence:
    """Outcome of stripping initial delays down to a non-delay frontier.

    kind is 'converged' or 'unknown'.  For 'converged', `frontier` is
    the tree with initial delays removed above every ret/yield/choice
    node and `used` counts the delays consumed (the fuel accounting is
    global across the choice frontier).  `all_delays` marks an unknown
    outcome where nothing but delays was seen — a diverging prefix.
    """

    kind: str
    frontier: Res | None = None
    used: int = 0
    all_delays: bool = False


def converges(r: Res, fuel: int) -> Convergence:
    used = 0
    saw_branch = False

    def go(r: Res) -> Node | None:
        nonlocal used, saw_branch
        node = r.force()
        while isinstance(node, Delay):
            if used >= fuel:
                return None
            used += 1
            node = node.rest.force()
        if isinstance(node, Plus):
            saw_branch = True
            left = go(node.left)
            if left is None:
                return None
            right = go(node.right)
            if right is None:
                return None
            return Plus(now(left), now(right))
        return node

    top = go(r)
    if top is None:
        return Convergence("unknown", used=used, all_delays=not saw_branch)
    return Convergence("converged", frontier=now(top), used=used)


def diverges(r: Res, fuel: int) -> bool:
    """Bounded witness of divergence: the first `fuel` forcings are all
    delays."""
    for _ in range(fuel):
        node = r.force()
        if not isinstance(node, Delay):
            return False
        r = node.rest
    return True


# ---------------------------------------------------------------------------
# Termination-sensitive weak bisimilarity


def weak_bisim(r1: Res, r2: Res, depth: int, fuel: int) -> Verdict:
    """Equality up to finite delay padding, still separating convergence
    from divergence.

    At each coinductive step either both sides are delays (strip one
    each), or both must shed their leading delays within `fuel` and the
    exposed heads must match: equal ret states, equal yields, or choices
    whose children are again weakly bisimilar.  Only the leading delays
    count as a convergence obligation; delays inside choice children are
    the recursive call's business, so a diverging branch below a matched
    choice is still related by the δ/δ rule.  A side that fails to shed
    its delays within fuel gives Unknown, never Holds.
    """

    def strip(node: Node) -> Node | None:
        budget = fuel
        while isinstance(node, Delay):
            if budget <= 0:
                return None
            budget -= 1
            node = node.rest.force()
        return node

    def step(a: Res, b: Res, d: int, path: tuple) -> Verdict | None:
        if d <= 0:
            return None
        na, nb = a.force(), b.force()
        if isinstance(na, Delay) and isinstance(nb, Delay):
            return step(na.rest, nb.rest, d - 1, path + (("δ",),))
        na, nb = strip(na), strip(nb)
        if na is None or nb is None:
            return Verdict(UNKNOWN, depth, path, budget="fuel")
        return matched(na, nb, d, path + (("conv",),))

    def matched(na: Node, nb: Node, d: int, path: tuple) -> Verdict | None:
        if type(na) is not type(nb):
            return Verdict(FAILS, depth, path, f"{_kind(na)} vs {_kind(nb)}")
        if isinstance(na, Ret):
            if na.state != nb.state:
                return Verdict(FAILS, depth, path, f"ret {na.state} vs ret {nb.state}")
            return None
        if isinstance(na, Yield):
            if na.state != nb.state or na.stmt != nb.stmt:
                return Verdict(FAILS, depth, path, "yield mismatch")
            return None
        if isinstance(na, Plus):
            bad = step(na.left, nb.left, d - 1, path + (("+", "L"),))
            if bad is not None:
                return bad
            return step(na.right, nb.right, d - 1, path + (("+", "R"),))
        return Verdict(FAILS, depth, path, f"unexpected node {_kind(na)}")

    bad = step(r1, r2, depth, ())
    return bad if bad is not None else Verdict(HOLDS, depth)


# ---------------------------------------------------------------------------
# Counterexample replay


def replay(r1: Res, r2: Res, path: tuple, fuel: int = 1000) -> tuple[Node, Node]:
    """Follow a recorded counterexample path into both trees and return
    the two nodes it ends at; for a Fails verdict these mismatch."""

    def follow(r: Res, steps: tuple) -> Node:
        node = r.force()
        for step in steps:
            if step[0] == "δ":
                assert isinstance(node, Delay), f"replay expected delay, got {_kind(node)}"
                node = node.rest.force()
            elif step[0] == "+":
                assert isinstance(node, Plus), f"replay expected choice, got {_kind(node)}"
                node = (node.left if step[1] == "L" else node.right).force()
            elif step[0] == "probe":
                assert isinstance(node, YieldK), f"replay expected yield, got {_kind(node)}"
                node = node.cont(step[1]).force()
            elif step[0] == "conv":
                budget = fuel
                while isinstance(node, Delay):
                    assert budget > 0, "replay convergence ran out of fuel"
                    budget -= 1
                    node = node.rest.force()
        return node

    return follow(r1, path), follow(r2, path)


def mismatched(na: Node, nb: Node) -> bool:
    """True if two nodes differ observably at the top layer."""
    if type(na) is not type(nb):
        return True
    if isinstance(na, Ret):
        return na.state != nb.state
    if isinstance(na, Yield):
        return na.state != nb.state or na.stmt != nb.stmt
    if isinstance(na, YieldK):
        return na.state != nb.state
    return False
