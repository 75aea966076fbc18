"""Exhaustive enumeration of small loops as reduced Latin squares.

A reduced square has first row and first column 0, 1, ..., n-1, i.e. it is a
loop table with identity 0.  Counts are of reduced squares, not isomorphism
classes (1, 1, 1, 4, 56, 9408 for n = 1..6).
"""
from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import permutations
from typing import Callable, Iterator

import numpy as np

from .errors import InputError, ResourceError
from .magma import FiniteBinarySystem, satisfies
from .structure import is_central_metagroup, is_metagroup

MAX_EXHAUSTIVE_ORDER = 6

PREDICATES: dict[str, Callable[[FiniteBinarySystem], bool]] = {
    "loop": lambda T: True,
    "group": lambda T: T.is_associative,
    "nonassociative": lambda T: not T.is_associative,
    "commutative": lambda T: bool((T.table == T.table.T).all()),
    "metagroup": lambda T: bool(is_metagroup(T)),
    "central-metagroup": lambda T: bool(is_central_metagroup(T)),
    "metagroup-not-group": lambda T: not T.is_associative and bool(is_metagroup(T)),
}


@dataclass
class SearchResult:
    order: int
    predicate: str
    total: int
    matched: int
    tables: list[np.ndarray] = field(default_factory=list)
    note: str = "counts are of reduced Latin squares (first row and column fixed), not isomorphism classes"

    def to_dict(self, with_tables: bool = False) -> dict:
        d = {"order": self.order, "predicate": self.predicate, "total": self.total,
             "matched": self.matched, "note": self.note}
        if with_tables:
            d["tables"] = [t.tolist() for t in self.tables]
        return d


def _get_predicate(name: str) -> Callable[[FiniteBinarySystem], bool]:
    try:
        return PREDICATES[name]
    except KeyError:
        raise InputError(f"unknown predicate {name!r}; known: {sorted(PREDICATES)}") from None


def _second_rows(n: int) -> list[tuple[int, ...]]:
    """Admissible row 1 contents (row index 1, columns 0..n-1)."""
    if n < 2:
        return []
    return [(1,) + p for p in permutations([x for x in range(n) if x != 1])
            if all(p[c - 1] != c for c in range(1, n))]


def _complete(n: int, row1: tuple[int, ...] | None) -> Iterator[np.ndarray]:
    """All reduced squares (with the given row 1), cell by cell."""
    sq = np.zeros((n, n), dtype=np.int64)
    sq[0] = np.arange(n)
    sq[:, 0] = np.arange(n)
    row_used = [1 << r for r in range(n)]
    col_used = [1 << c for c in range(n)]
    start = 1
    if row1 is not None:
        sq[1] = row1
        for c in range(1, n):
            row_used[1] |= 1 << row1[c]
            col_used[c] |= 1 << row1[c]
        start = 2
    cells = [(r, c) for r in range(start, n) for c in range(1, n)]

    def rec(k):
        if k == len(cells):
            yield sq.copy()
            return
        r, c = cells[k]
        free = ~(row_used[r] | col_used[c])
        for x in range(n):
            if free >> x & 1:
                sq[r, c] = x
                row_used[r] |= 1 << x
                col_used[c] |= 1 << x
                yield from rec(k + 1)
                row_used[r] &= ~(1 << x)
                col_used[c] &= ~(1 << x)

    yield from rec(0)


def _work(args) -> tuple[int, int, list[np.ndarray]]:
    n, row1, pred_name, keep = args
    pred = _get_predicate(pred_name)
    total = matched = 0
    kept = []
    for sq in _complete(n, row1):
        total += 1
        if pred(FiniteBinarySystem(sq, normalize=False)):
            matched += 1
            if keep:
                kept.append(sq)
    return total, matched, kept


def search_small(order: int, predicate: str = "loop", *, jobs: int = 1, keep_tables: bool = False) -> SearchResult:
    """Enumerate every reduced loop table of ``order`` and count those meeting ``predicate``.

    With ``jobs > 1`` the squares are split by their second row and the
    pieces are merged in a fixed order, so results do not depend on ``jobs``.
    """
    _get_predicate(predicate)
    if order < 1:
        raise InputError(f"order must be >= 1, got {order}")
    if order > MAX_EXHAUSTIVE_ORDER:
        raise ResourceError(
            f"exhaustive search is limited to order <= {MAX_EXHAUSTIVE_ORDER}; "
            f"use randomized mode (search --random N --seed S) for order {order}", order)
    prefixes = _second_rows(order) or [None]
    tasks = [(order, p, predicate, keep_tables) for p in prefixes]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            parts = list(ex.map(_work, tasks))
    else:
        parts = [_work(t) for t in tasks]
    res = SearchResult(order, predicate, 0, 0)
    for total, matched, kept in parts:
        res.total += total
        res.matched += matched
        res.tables.extend(kept)
    return res


def brute_force_count(order: int, predicate: str = "loop") -> tuple[int, int]:
    """Independent recount: choose whole rows among permutations, reject column clashes."""
    pred = _get_predicate(predicate)
    n = order
    if n > MAX_EXHAUSTIVE_ORDER - 1:
        raise ResourceError(f"row-permutation recount is limited to order <= {MAX_EXHAUSTIVE_ORDER - 1}")
    rows_for = [[p for p in permutations(range(n)) if p[0] == r] for r in range(n)]
    total = matched = 0
    chosen: list[tuple[int, ...]] = [tuple(range(n))]

    def rec(r):
        nonlocal total, matched
        if r == n:
            total += 1
            if pred(FiniteBinarySystem(np.array(chosen), normalize=False)):
                matched += 1
            return
        for p in rows_for[r]:
            if all(p[c] != q[c] for q in chosen for c in range(n)):
                chosen.append(p)
                rec(r + 1)
                chosen.pop()

    rec(1)
    return total, matched


def random_loops(order: int, count: int, seed: int, predicate: str = "loop") -> SearchResult:
    """Sample reduced loop tables by randomized backtracking (not uniform)."""
    pred = _get_predicate(predicate)
    if order < 1:
        raise InputError(f"order must be >= 1, got {order}")
    rng = np.random.default_rng(seed)
    n = order
    res = SearchResult(order, predicate, 0, 0, note="randomized sample; distribution is not uniform")
    for _ in range(count):
        sq = _random_square(n, rng)
        res.total += 1
        if pred(FiniteBinarySystem(sq, normalize=False)):
            res.matched += 1
            res.tables.append(sq)
    return res


def _random_square(n: int, rng: np.random.Generator) -> np.ndarray:
    sq = np.zeros((n, n), dtype=np.int64)
    sq[0] = np.arange(n)
    sq[:, 0] = np.arange(n)
    cells = [(r, c) for r in range(1, n) for c in range(1, n)]

    def rec(k):
        if k == len(cells):
            return True
        r, c = cells[k]
        used = set(sq[r, :c].tolist()) | set(sq[:r, c].tolist()) | {r}
        for x in rng.permutation(n):
            if int(x) not in used:
                sq[r, c] = x
                if rec(k + 1):
                    return True
        return False

    rec(0)
    return sq


def all_small_loops_are_groups(max_order: int = 3) -> bool:
    return all(satisfies(FiniteBinarySystem(sq, normalize=False), "group")
               for n in range(1, max_order + 1) for sq in _complete(n, None))
