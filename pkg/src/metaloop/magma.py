"""Finite binary systems stored as dense Cayley tables.

Elements are the integers ``0..n-1``.  When a two-sided identity exists it is
moved to index 0 on construction, so every loop in this package has ``e == 0``.
Structures are immutable; division tables and the classification are computed
once and cached.
"""
from __future__ import annotations

from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .errors import InputError, StructureError

# Strongest-first order used by classify(); "group" and "central-metagroup"
# are incomparable, group is reported when it applies.
LEVELS = ("magma", "quasigroup", "loop", "metagroup", "central-metagroup", "group")


class FiniteBinarySystem:
    """A finite set ``{0..n-1}`` with a multiplication table.

    ``table[a][b]`` is the index of ``a*b``.  If the table has a two-sided
    identity different from 0 the elements are relabelled (0 and e swapped,
    names included); ``relabel[old] == new`` records the permutation applied.
    """

    def __init__(self, table, names: Sequence[str] | None = None, *, normalize: bool = True):
        try:
            arr = np.array(table, dtype=np.int64)
        except (TypeError, ValueError) as exc:
            raise InputError(f"table is not a rectangular integer array: {exc}") from None
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] == 0:
            raise InputError(f"table must be a non-empty square array, got shape {arr.shape}")
        n = arr.shape[0]
        bad = np.argwhere((arr < 0) | (arr >= n))
        if len(bad):
            a, b = (int(x) for x in bad[0])
            raise InputError(f"table[{a}][{b}] = {arr[a, b]} is out of range for order {n}", (a, b))
        if names is not None:
            names = [str(x) for x in names]
            if len(names) != n:
                raise InputError(f"expected {n} names, got {len(names)}")

        perm = np.arange(n)
        e = _find_identity(arr)
        if normalize and e not in (None, 0):
            perm[0], perm[e] = e, 0
            arr = perm[arr[np.ix_(perm, perm)]]
            if names is not None:
                names = [names[int(p)] for p in perm]
            e = 0
        arr.setflags(write=False)
        self._table = arr
        self._identity = e
        self.names = tuple(names) if names is not None else None
        self.relabel = tuple(int(p) for p in perm)

    # basic data ---------------------------------------------------------

    @property
    def order(self) -> int:
        return self._table.shape[0]

    def __len__(self) -> int:
        return self.order

    @property
    def table(self) -> np.ndarray:
        return self._table

    @property
    def identity(self) -> int | None:
        return self._identity

    def name(self, a: int) -> str:
        return self.names[a] if self.names else str(a)

    def __eq__(self, other) -> bool:
        return isinstance(other, FiniteBinarySystem) and np.array_equal(self._table, other._table)

    def __hash__(self) -> int:
        return hash(self._table.tobytes())

    def __repr__(self) -> str:
        return f"FiniteBinarySystem(order={self.order}, identity={self._identity})"

    def _check(self, *elems: int) -> None:
        n = self.order
        for x in elems:
            if not (0 <= x < n):
                raise InputError(f"element {x} out of range for order {n}", x)

    # multiplication and divisions ---------------------------------------

    def mul(self, a: int, b: int) -> int:
        self._check(a, b)
        return int(self._table[a, b])

    @cached_property
    def is_latin(self) -> bool:
        n = self.order
        ref = np.arange(n)
        rows = np.sort(self._table, axis=1)
        cols = np.sort(self._table, axis=0)
        return bool((rows == ref).all() and (cols == ref[:, None]).all())

    @cached_property
    def ldiv_table(self) -> np.ndarray:
        """``ldiv_table[a, b] == a\\b``, the x with ``a*x == b``."""
        self._require_quasigroup()
        n = self.order
        out = np.empty((n, n), dtype=np.int64)
        out[np.arange(n)[:, None], self._table] = np.arange(n)[None, :]
        out.setflags(write=False)
        return out

    @cached_property
    def rdiv_table(self) -> np.ndarray:
        """``rdiv_table[b, a] == b/a``, the y with ``y*a == b``."""
        self._require_quasigroup()
        n = self.order
        out = np.empty((n, n), dtype=np.int64)
        out[self._table, np.arange(n)[None, :]] = np.arange(n)[:, None]
        out.setflags(write=False)
        return out

    def _require_quasigroup(self) -> None:
        if not self.is_latin:
            raise StructureError("not a quasigroup: divisions are not unique", latin_violation(self))

    def _require_loop(self) -> int:
        if self._identity is None or not self.is_latin:
            raise StructureError("not a loop: no two-sided identity or not a quasigroup")
        return self._identity

    def div_l(self, a: int, b: int) -> int:
        """``a\\b``: the unique x with ``a*x == b``."""
        self._check(a, b)
        return int(self.ldiv_table[a, b])

    def div_r(self, b: int, a: int) -> int:
        """``b/a``: the unique y with ``y*a == b``."""
        self._check(a, b)
        return int(self.rdiv_table[b, a])

    def inv_l(self, a: int) -> int:
        return self.div_l(a, self._require_loop())

    def inv_r(self, a: int) -> int:
        return self.div_r(self._require_loop(), a)

    # classification ------------------------------------------------------

    @property
    def is_quasigroup(self) -> bool:
        return self.is_latin

    @property
    def is_loop(self) -> bool:
        return self.is_latin and self._identity is not None

    @cached_property
    def is_associative(self) -> bool:
        return associativity_witness(self) is None

    @cached_property
    def class_tag(self) -> str:
        return classify(self)


def _find_identity(arr: np.ndarray) -> int | None:
    n = arr.shape[0]
    ref = np.arange(n)
    rows = (arr == ref[None, :]).all(axis=1)
    cols = (arr == ref[:, None]).all(axis=0)
    both = np.flatnonzero(rows & cols)
    return int(both[0]) if len(both) else None


def latin_violation(T: FiniteBinarySystem) -> tuple[str, int] | None:
    """First row or column that is not a permutation, as ``("row"|"col", index)``."""
    n = T.order
    ref = np.arange(n)
    for a in range(n):
        if not np.array_equal(np.sort(T.table[a]), ref):
            return ("row", a)
    for b in range(n):
        if not np.array_equal(np.sort(T.table[:, b]), ref):
            return ("col", b)
    return None


def associativity_witness(T: FiniteBinarySystem) -> tuple[int, int, int] | None:
    """Lexicographically first (a, b, c) with (ab)c != a(bc), or None."""
    t = T.table
    for a in range(T.order):
        lhs = t[t[a]]          # [b, c] -> (ab)c
        rhs = t[a][t]          # [b, c] -> a(bc)
        bad = np.argwhere(lhs != rhs)
        if len(bad):
            return (a, int(bad[0][0]), int(bad[0][1]))
    return None


def classify(T: FiniteBinarySystem) -> str:
    """Strongest applicable tag from LEVELS (group beats central-metagroup)."""
    if not T.is_latin:
        return "magma"
    if T.identity is None:
        return "quasigroup"
    if T.is_associative:
        return "group"
    from .structure import is_central_metagroup, is_metagroup

    if not is_metagroup(T):
        return "loop"
    return "central-metagroup" if is_central_metagroup(T) else "metagroup"


def satisfies(T: FiniteBinarySystem, level: str) -> bool:
    """Does T meet ``level`` (checked directly, not via the class tag order)?"""
    from .structure import is_central_metagroup, is_metagroup

    if level not in LEVELS:
        raise InputError(f"unknown level {level!r}; expected one of {LEVELS}")
    if level == "magma":
        return True
    if level == "quasigroup":
        return T.is_latin
    if level == "loop":
        return T.is_loop
    if level == "group":
        return T.is_loop and T.is_associative
    if level == "metagroup":
        return bool(is_metagroup(T))
    return bool(is_central_metagroup(T))


# elementwise set operations ----------------------------------------------

def set_mul(T: FiniteBinarySystem, X: Iterable[int], Y: Iterable[int]) -> frozenset[int]:
    """XY = {xy : x in X, y in Y}."""
    X, Y = list(X), list(Y)
    if not X or not Y:
        return frozenset()
    return frozenset(T.table[np.ix_(X, Y)].ravel().tolist())


def set_div_r(T: FiniteBinarySystem, X: Iterable[int], Y: Iterable[int]) -> frozenset[int]:
    """X/Y = {x/y : x in X, y in Y}."""
    X, Y = list(X), list(Y)
    if not X or not Y:
        return frozenset()
    return frozenset(T.rdiv_table[np.ix_(X, Y)].ravel().tolist())


def set_div_l(T: FiniteBinarySystem, X: Iterable[int], Y: Iterable[int]) -> frozenset[int]:
    """X\\Y = {x\\y : x in X, y in Y}."""
    X, Y = list(X), list(Y)
    if not X or not Y:
        return frozenset()
    return frozenset(T.ldiv_table[np.ix_(X, Y)].ravel().tolist())
