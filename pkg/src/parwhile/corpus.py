"""Deterministic random program generator for the differential suites.

Programs are drawn from the parser grammar only (no auxiliary forms),
cover every statement constructor and both guard polarities across a
corpus, and round-trip through the pretty printer.  Variables are drawn
almost entirely from {x, y} (z appears rarely) to keep probe sets small.
"""

from __future__ import annotations

import random

from .lang import (
    And,
    Arith,
    Assign,
    Atomic,
    Await,
    BoolLit,
    Cmp,
    If,
    IntLit,
    Not,
    Or,
    Par,
    Seq,
    Skip,
    State,
    Stmt,
    Var,
    While,
)

_OPS_ARITH = ("+", "-", "*")
_OPS_CMP = ("=", "<", "<=")


def _gen_var(rng: random.Random) -> str:
    # z is deliberately rare: each extra variable multiplies probe sets.
    return rng.choices(("x", "y", "z"), weights=(10, 8, 1))[0]


def _gen_iexpr(rng: random.Random, size: int):
    if size <= 1 or rng.random() < 0.5:
        if rng.random() < 0.5:
            return Var(_gen_var(rng))
        return IntLit(rng.randrange(0, 4))
    op = rng.choice(_OPS_ARITH)
    left_size = rng.randrange(1, size)
    return Arith(op, _gen_iexpr(rng, left_size), _gen_iexpr(rng, size - left_size))


def _gen_bexpr(rng: random.Random, size: int):
    roll = rng.random()
    if size <= 1:
        if roll < 0.15:
            return BoolLit(rng.random() < 0.5)
        return Cmp(rng.choice(_OPS_CMP), _gen_iexpr(rng, 1), _gen_iexpr(rng, 1))
    if roll < 0.1:
        return Not(_gen_bexpr(rng, size - 1))
    if roll < 0.2:
        cls = And if rng.random() < 0.5 else Or
        left_size = rng.randrange(1, size)
        return cls(_gen_bexpr(rng, left_size), _gen_bexpr(rng, size - left_size))
    return Cmp(rng.choice(_OPS_CMP), _gen_iexpr(rng, (size + 1) // 2), _gen_iexpr(rng, size // 2))


def gen_stmt(rng: random.Random, size: int) -> Stmt:
    """A random statement of at most `size` leaf constructors."""
    if size <= 1:
        # smallest productions: skip or a literal assignment
        if rng.random() < 0.3:
            return Skip()
        return Assign(_gen_var(rng), _gen_iexpr(rng, 1))
    kind = rng.choices(
        ("assign", "skip", "seq", "if", "while", "par", "atomic", "await"),
        weights=(5, 1, 6, 3, 2, 4, 2, 2),
    )[0]
    if kind == "assign":
        return Assign(_gen_var(rng), _gen_iexpr(rng, min(size, 3)))
    if kind == "skip":
        return Skip()
    if kind == "seq":
        left_size = rng.randrange(1, size)
        return Seq(gen_stmt(rng, left_size), gen_stmt(rng, size - left_size))
    if kind == "if":
        left_size = max(1, (size - 1) // 2)
        return If(
            _gen_bexpr(rng, 2),
            gen_stmt(rng, left_size),
            gen_stmt(rng, max(1, size - 1 - left_size)),
        )
    if kind == "while":
        return While(_gen_bexpr(rng, 2), gen_stmt(rng, size - 1))
    if kind == "par":
        left_size = rng.randrange(1, size)
        return Par(gen_stmt(rng, left_size), gen_stmt(rng, size - left_size))
    if kind == "atomic":
        return Atomic(gen_stmt(rng, size - 1))
    return Await(_gen_bexpr(rng, 2), gen_stmt(rng, size - 1))


def gen_state(rng: random.Random) -> State:
    items = []
    for name in ("x", "y", "z"):
        if rng.random() < 0.7:
            items.append((name, rng.randrange(0, 4)))
    return State(tuple(items))


def gen_corpus(seed: int, count: int, max_size: int) -> list[tuple[Stmt, State]]:
    """`count` random (program, initial state) pairs, deterministic in
    `seed`; program sizes are spread over 1..max_size."""
    if count <= 0 or max_size <= 0:
        raise ValueError("count and max_size must be positive")
    rng = random.Random(seed)
    out = []
    for i in range(count):
        size = 1 + (i % max_size) if max_size > 1 else 1
        out.append((gen_stmt(rng, size), gen_state(rng)))
    return out
