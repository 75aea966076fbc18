"""Commutant, nuclei, center, associators and the metagroup predicates.

All predicates return a :class:`~metaloop.errors.Verdict` whose witness is the
lexicographically first violating tuple.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator

import numpy as np

from .errors import InputError, PASS, StructureError, Verdict
from .magma import FiniteBinarySystem, set_mul


@dataclass(frozen=True)
class Subset:
    """A subset of the carrier of ``parent``; members are kept sorted."""

    parent: FiniteBinarySystem
    members: tuple[int, ...]

    def __post_init__(self):
        n = self.parent.order
        ms = tuple(sorted({int(m) for m in self.members}))
        for m in ms:
            if not 0 <= m < n:
                raise InputError(f"subset member {m} out of range for order {n}", m)
        object.__setattr__(self, "members", ms)

    @classmethod
    def of(cls, parent: FiniteBinarySystem, members: Iterable[int]) -> "Subset":
        return cls(parent, tuple(members))

    @classmethod
    def whole(cls, parent: FiniteBinarySystem) -> "Subset":
        return cls(parent, tuple(range(parent.order)))

    @classmethod
    def trivial(cls, parent: FiniteBinarySystem) -> "Subset":
        return cls(parent, (parent.identity if parent.identity is not None else 0,))

    def __contains__(self, x) -> bool:
        return x in self.set

    def __iter__(self) -> Iterator[int]:
        return iter(self.members)

    def __len__(self) -> int:
        return len(self.members)

    @property
    def set(self) -> frozenset[int]:
        return frozenset(self.members)

    @property
    def mask(self) -> np.ndarray:
        m = np.zeros(self.parent.order, dtype=bool)
        m[list(self.members)] = True
        return m

    def __repr__(self) -> str:
        return f"Subset({list(self.members)})"


def _from_mask(T: FiniteBinarySystem, mask: np.ndarray) -> Subset:
    return Subset(T, tuple(int(i) for i in np.flatnonzero(mask)))


def _assoc_equal(T: FiniteBinarySystem) -> np.ndarray:
    """Boolean cube eq[a, b, c] == ((ab)c == a(bc))."""
    t = T.table
    n = T.order
    eq = np.empty((n, n, n), dtype=bool)
    for a in range(n):
        eq[a] = t[t[a]] == t[a][t]
    return eq


def commutant(T: FiniteBinarySystem) -> Subset:
    t = T.table
    return _from_mask(T, (t == t.T).all(axis=1))


def nucleus_left(T: FiniteBinarySystem) -> Subset:
    return _from_mask(T, _assoc_equal(T).all(axis=(1, 2)))


def nucleus_middle(T: FiniteBinarySystem) -> Subset:
    return _from_mask(T, _assoc_equal(T).all(axis=(0, 2)))


def nucleus_right(T: FiniteBinarySystem) -> Subset:
    return _from_mask(T, _assoc_equal(T).all(axis=(0, 1)))


def nuclei(T: FiniteBinarySystem) -> tuple[Subset, Subset, Subset]:
    """(N_l, N_m, N_r) from a single associativity scan."""
    eq = _assoc_equal(T)
    return (
        _from_mask(T, eq.all(axis=(1, 2))),
        _from_mask(T, eq.all(axis=(0, 2))),
        _from_mask(T, eq.all(axis=(0, 1))),
    )


def nucleus(T: FiniteBinarySystem) -> Subset:
    eq = _assoc_equal(T)
    return _from_mask(T, eq.all(axis=(1, 2)) & eq.all(axis=(0, 2)) & eq.all(axis=(0, 1)))


def center(T: FiniteBinarySystem) -> Subset:
    return Subset(T, tuple(sorted(commutant(T).set & nucleus(T).set)))


def associator_t(T: FiniteBinarySystem, a: int, b: int, c: int) -> int:
    """The y with ``y * (a(bc)) == (ab)c``."""
    lhs = T.mul(T.mul(a, b), c)
    rhs = T.mul(a, T.mul(b, c))
    return T.div_r(lhs, rhs)


def associator_table(T: FiniteBinarySystem) -> np.ndarray:
    """Cube ``t[a, b, c]`` of all associators (T must be a quasigroup)."""
    t = T.table
    rdiv = T.rdiv_table
    n = T.order
    out = np.empty((n, n, n), dtype=np.int64)
    for a in range(n):
        out[a] = rdiv[t[t[a]], t[a][t]]
    return out


def is_metagroup(T: FiniteBinarySystem) -> Verdict:
    """Loop whose associator takes values in the center; witness (a, b, c)."""
    if not T.is_loop:
        return Verdict(False, None)
    cmask = center(T).mask
    t = T.table
    rdiv = T.rdiv_table
    for a in range(T.order):
        ta = rdiv[t[t[a]], t[a][t]]
        bad = np.argwhere(~cmask[ta])
        if len(bad):
            return Verdict(False, (a, int(bad[0][0]), int(bad[0][1])))
    return PASS


def commutator_t2(T: FiniteBinarySystem) -> np.ndarray:
    """``t2[a, b] = (ab)/(ba)``, so that ab = t2(a,b)·ba."""
    t = T.table
    return T.rdiv_table[t, t.T]


def is_central_metagroup(T: FiniteBinarySystem) -> Verdict:
    """Metagroup whose commutator t2 is central; witness is a triple or a pair."""
    meta = is_metagroup(T)
    if not meta:
        return meta
    cmask = center(T).mask
    bad = np.argwhere(~cmask[commutator_t2(T)])
    if len(bad):
        return Verdict(False, (int(bad[0][0]), int(bad[0][1])))
    return PASS


# subset predicates -----------------------------------------------------------

def _as_subset(T: FiniteBinarySystem, S) -> Subset:
    return S if isinstance(S, Subset) else Subset.of(T, S)


def is_submetagroup(T: FiniteBinarySystem, S) -> Verdict:
    """Contains the identity and is closed under mul, div_l and div_r.

    Witness: ``("identity",)`` or ``(op, x, y)``.
    """
    S = _as_subset(T, S)
    if T.identity is not None and T.identity not in S:
        return Verdict(False, ("identity",))
    ms = list(S.members)
    mask = S.mask
    for op, tab in (("mul", T.table), ("div_l", T.ldiv_table), ("div_r", T.rdiv_table)):
        sub = tab[np.ix_(ms, ms)]
        bad = np.argwhere(~mask[sub])
        if len(bad):
            i, j = bad[0]
            return Verdict(False, (op, ms[i], ms[j]))
    return PASS


def is_almost_invariant(T: FiniteBinarySystem, S) -> Verdict:
    """gS == Sg for every g; witness g."""
    S = _as_subset(T, S)
    for g in range(T.order):
        if set_mul(T, [g], S) != set_mul(T, S, [g]):
            return Verdict(False, g)
    return PASS


def is_invariant(T: FiniteBinarySystem, S) -> Verdict:
    """Almost invariant plus (gS)k == g(Sk) and k(gS) == (kg)S for all g, k.

    Witness: ``("almost", g)`` or ``("left"|"right", g, k)``.
    """
    S = _as_subset(T, S)
    sub = is_submetagroup(T, S)
    if not sub:
        return Verdict(False, ("submetagroup",) + tuple(sub.witness))
    ai = is_almost_invariant(T, S)
    if not ai:
        return Verdict(False, ("almost", ai.witness))
    n = T.order
    gS = [set_mul(T, [g], S) for g in range(n)]
    Sk = [set_mul(T, S, [k]) for k in range(n)]
    for g in range(n):
        for k in range(n):
            if set_mul(T, gS[g], [k]) != set_mul(T, [g], Sk[k]):
                return Verdict(False, ("right", g, k))
            if set_mul(T, [k], gS[g]) != gS[T.mul(k, g)]:
                return Verdict(False, ("left", g, k))
    return PASS


def closure(T: FiniteBinarySystem, generators: Iterable[int]) -> Subset:
    """Smallest subset containing ``generators`` and e, closed under mul/div_l/div_r."""
    members = set(int(g) for g in generators)
    if T.identity is not None:
        members.add(T.identity)
    work = list(members)
    while work:
        x = work.pop()
        for y in list(members):
            for z in (T.mul(x, y), T.mul(y, x), T.div_l(x, y), T.div_l(y, x),
                      T.div_r(x, y), T.div_r(y, x)):
                if z not in members:
                    members.add(z)
                    work.append(z)
    return Subset(T, tuple(members))


def minimal_t_subgroup(T: FiniteBinarySystem) -> Subset:
    """Subgroup generated by all associator values t(a, b, c)."""
    if not T.is_loop:
        raise StructureError("minimal_t_subgroup needs a loop")
    values = np.unique(associator_table(T))
    return closure(T, values.tolist())
