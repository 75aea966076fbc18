"""Finite topologies on quasigroup carriers and the W(S, Q) set algebra on B^V.

Subsets of an n-point carrier are Python ints used as bitmasks (bit x set when
x is a member).  A topology is stored as the sorted tuple of its open masks.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

from .errors import InputError, PreconditionError, Report, Verdict
from .magma import FiniteBinarySystem


def to_mask(members: Iterable[int]) -> int:
    m = 0
    for x in members:
        m |= 1 << int(x)
    return m


def members(mask: int) -> list[int]:
    out, x = [], 0
    while mask:
        if mask & 1:
            out.append(x)
        mask >>= 1
        x += 1
    return out


def _as_mask(U) -> int:
    return U if isinstance(U, (int, np.integer)) else to_mask(U)


@dataclass(frozen=True)
class FiniteTopology:
    n: int
    opens: tuple[int, ...]

    def __init__(self, n: int, opens: Iterable):
        full = (1 << n) - 1
        ms = sorted({int(_as_mask(U)) for U in opens})
        for U in ms:
            if U < 0 or U > full:
                raise InputError(f"open set {members(U)} is not inside a {n}-point carrier", U)
        s = set(ms)
        if 0 not in s:
            raise InputError("topology must contain the empty set")
        if full not in s:
            raise InputError("topology must contain the whole carrier")
        for U, V in combinations(ms, 2):
            if U | V not in s:
                raise InputError(f"union of {members(U)} and {members(V)} is not open", (U, V))
            if U & V not in s:
                raise InputError(f"intersection of {members(U)} and {members(V)} is not open", (U, V))
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "opens", tuple(ms))

    @classmethod
    def _trusted(cls, n: int, opens: Sequence[int]) -> "FiniteTopology":
        # for families that are topologies by construction; skips the quadratic check
        T = object.__new__(cls)
        object.__setattr__(T, "n", n)
        object.__setattr__(T, "opens", tuple(sorted(opens)))
        return T

    def __contains__(self, U) -> bool:
        return _as_mask(U) in set(self.opens)

    def __len__(self) -> int:
        return len(self.opens)

    def minimal_neighbourhood(self, x: int) -> int:
        m = (1 << self.n) - 1
        for U in self.opens:
            if U >> x & 1:
                m &= U
        return m

    @property
    def is_t1(self) -> bool:
        return all(self.minimal_neighbourhood(x) == 1 << x for x in range(self.n))

    def as_lists(self) -> list[list[int]]:
        return [members(U) for U in self.opens]


def discrete(n: int) -> FiniteTopology:
    return FiniteTopology._trusted(n, range(1 << n))


def indiscrete(n: int) -> FiniteTopology:
    return FiniteTopology._trusted(n, sorted({0, (1 << n) - 1}))


def generated_topology(n: int, subbase: Iterable) -> FiniteTopology:
    """Smallest topology containing the given sets."""
    full = (1 << n) - 1
    opens = {0, full} | {int(_as_mask(U)) for U in subbase}
    changed = True
    while changed:
        changed = False
        cur = list(opens)
        for U in cur:
            for V in cur:
                for W in (U | V, U & V):
                    if W not in opens:
                        opens.add(W)
                        changed = True
    return FiniteTopology(n, opens)


def enumerate_topologies(n: int) -> list[FiniteTopology]:
    """All topologies on n <= 4 points by brute force (1, 1, 4, 29, 355 of them)."""
    if n > 4:
        raise InputError("brute-force topology enumeration is limited to n <= 4")
    full = (1 << n) - 1
    middle = list(range(1, full))
    out = []
    for pick in range(1 << len(middle)):
        fam = {0, full} | {middle[k] for k in range(len(middle)) if pick >> k & 1}
        if all((U | V) in fam and (U & V) in fam for U in fam for V in fam):
            out.append(FiniteTopology(n, fam))
    return out


def random_topology(n: int, rng: np.random.Generator, k: int = 3) -> FiniteTopology:
    subbase = [int(rng.integers(0, 1 << n)) for _ in range(k)]
    return generated_topology(n, subbase)


# neighbourhood bases --------------------------------------------------------

@dataclass(frozen=True)
class BaseFamily:
    """Per-element collections B_g of subsets (masks) of an n-point carrier."""

    n: int
    at: tuple[tuple[int, ...], ...]

    def __init__(self, n: int, at: Sequence[Iterable]):
        if len(at) != n:
            raise InputError(f"base needs one family per element: expected {n}, got {len(at)}")
        fams = tuple(tuple(sorted({int(_as_mask(U)) for U in fam})) for fam in at)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "at", fams)

    def __getitem__(self, g: int) -> tuple[int, ...]:
        return self.at[g]

    def as_lists(self) -> list[list[list[int]]]:
        return [[members(U) for U in fam] for fam in self.at]


def _size(G) -> int:
    return G if isinstance(G, int) else G.order


def base_from_topology(G, T: FiniteTopology) -> BaseFamily:
    """B_g = all open sets containing g (only the carrier size of G is used)."""
    n = _size(G)
    if n != T.n:
        raise InputError(f"topology is on {T.n} points, structure has {n}")
    return BaseFamily(n, [[U for U in T.opens if U >> g & 1] for g in range(n)])


def discrete_base(n: int) -> BaseFamily:
    return BaseFamily(n, [[1 << g] for g in range(n)])


def topology_from_base(B: BaseFamily) -> FiniteTopology:
    """All unions of subfamilies of B; PreconditionError if that is not a topology."""
    full = (1 << B.n) - 1
    opens = {0}
    for U in sorted({U for fam in B.at for U in fam}):
        opens |= {U | W for W in opens}
    if full not in opens:
        raise PreconditionError("unions of base members do not cover the carrier", members(full & ~max(opens)))
    ms = sorted(opens)
    for U, V in combinations(ms, 2):
        if U & V not in opens:
            raise PreconditionError("base invalid: intersection of two unions is not a union",
                                    (members(U), members(V)))
    return FiniteTopology(B.n, ms)


class _SetOps:
    """Elementwise images of masks under mul, div_l, div_r of a quasigroup."""

    def __init__(self, G: FiniteBinarySystem):
        self.G = G
        n = G.order
        self.n = n
        bits = [1 << x for x in range(n)]
        # row masks: for fixed x, {x*y : y in Y} is the OR of bits over Y
        self.mul = G.table
        self.ldiv = G.ldiv_table
        self.rdiv = G.rdiv_table
        self.bits = bits

    def image(self, tab: np.ndarray, X: int, Y: int) -> int:
        xs, ys = members(X), members(Y)
        if not xs or not ys:
            return 0
        return to_mask(np.unique(tab[np.ix_(xs, ys)]).tolist())

    def left(self, tab, h: int, U: int) -> int:
        return self.image(tab, 1 << h, U)

    def right(self, tab, U: int, h: int) -> int:
        return self.image(tab, U, 1 << h)


def verify_base_axioms(G: FiniteBinarySystem, B: BaseFamily) -> Report:
    """Items base_1 .. base_8: translation, division, membership, the three
    continuity conditions, the intersection condition and the T1 condition."""
    if not G.is_quasigroup:
        raise PreconditionError("base axioms need a quasigroup")
    if B.n != G.order:
        raise InputError(f"base is on {B.n} points, structure has {G.order}")
    ops = _SetOps(G)
    n = G.order
    fam = [set(B[g]) for g in range(n)]
    rep = Report("neighbourhood base")

    def first(pred_iter):
        return next(pred_iter, None)

    # base_1: B_{hg} = h B_g and B_{gh} = B_g h
    w = first(
        (kind, g, h)
        for g in range(n) for h in range(n)
        for kind, lhs, rhs in (
            ("left", fam[G.mul(h, g)], {ops.left(ops.mul, h, U) for U in fam[g]}),
            ("right", fam[G.mul(g, h)], {ops.right(ops.mul, U, h) for U in fam[g]}),
        )
        if lhs != rhs
    )
    rep.add("base_1_translation", w is None, w)

    # base_2: B_{h\g} = h\B_g and B_{g/h} = B_g/h
    w = first(
        (kind, g, h)
        for g in range(n) for h in range(n)
        for kind, lhs, rhs in (
            ("div_l", fam[G.div_l(h, g)], {ops.left(ops.ldiv, h, U) for U in fam[g]}),
            ("div_r", fam[G.div_r(g, h)], {ops.right(ops.rdiv, U, h) for U in fam[g]}),
        )
        if lhs != rhs
    )
    rep.add("base_2_division", w is None, w)

    w = first((g, members(U)) for g in range(n) for U in B[g] if not U >> g & 1)
    rep.add("base_3_membership", w is None, w)

    def joint(tab, b_of, order):
        # for every g, U_g in B_g, a: some U_a in B_a and U_b in B_b with image inside U_g
        for g in range(n):
            for Ug in B[g]:
                for a in range(n):
                    b = b_of(g, a)
                    ok = any(
                        ops.image(tab, *order(Ua, Ub)) & ~Ug == 0
                        for Ua in B[a] for Ub in B[b]
                    )
                    if not ok:
                        return (g, members(Ug), a)
        return None

    w = joint(ops.mul, lambda g, a: G.div_l(a, g), lambda Ua, Ub: (Ua, Ub))
    rep.add("base_4_mul", w is None, w)
    w = joint(ops.rdiv, lambda g, a: G.div_l(g, a), lambda Ua, Ub: (Ua, Ub))
    rep.add("base_5_div_r", w is None, w)
    w = joint(ops.ldiv, lambda g, a: G.div_r(a, g), lambda Ua, Ub: (Ub, Ua))
    rep.add("base_6_div_l", w is None, w)

    w = first(
        (g, members(U), members(V))
        for g in range(n) for U in B[g] for V in B[g]
        if not any(W & ~(U & V) == 0 for W in B[g])
    )
    rep.add("base_7_intersection", w is None, w)

    def meet(g):
        m = (1 << n) - 1
        for U in B[g]:
            m &= U
        return m

    w = first((g, members(meet(g))) for g in range(n) if meet(g) != 1 << g)
    rep.add("base_8_t1", w is None, w)
    return rep


def check_continuity(G: FiniteBinarySystem, T: FiniteTopology) -> Report:
    """Joint continuity of mul, div_l and div_r as maps G x G -> G.

    With M(x) the smallest open set containing x, the preimage of every open
    set is open in the product topology exactly when f(M(a) x M(b)) lies in
    M(f(a, b)) for all a, b.  On failure the witness is the open set M(f(a, b))
    whose preimage is not open, and the pair (a, b) inside that preimage.
    """
    if not G.is_quasigroup:
        raise PreconditionError("continuity check needs a quasigroup")
    if T.n != G.order:
        raise InputError(f"topology is on {T.n} points, structure has {G.order}")
    n = G.order
    Mmask = [T.minimal_neighbourhood(x) for x in range(n)]
    M = [members(m) for m in Mmask]
    inside = np.zeros((n, n), dtype=bool)      # inside[y, z]: z in M(y)
    for y in range(n):
        inside[y, M[y]] = True
    rep = Report("continuity")
    for name, tab in (("mul", G.table), ("div_l", G.ldiv_table), ("div_r", G.rdiv_table)):
        w = None
        for a in range(n):
            for b in range(n):
                y = int(tab[a, b])
                if not inside[y, tab[np.ix_(M[a], M[b])]].all():
                    w = {"open": M[y], "pair": (a, b)}
                    break
            if w:
                break
        rep.add(f"{name}_continuous", w is None, w)
    t1 = all(Mmask[x] == 1 << x for x in range(n))
    rep.info["T1"] = t1
    rep.info["note"] = ("T1 holds" if t1 else "not T1") + "; a finite T1 space is discrete"
    return rep


# W(S, Q) -------------------------------------------------------------------

class _Functions:
    """Maps {0..m-1} -> B by mixed-radix index (first point most significant)."""

    def __init__(self, m: int, B: FiniteBinarySystem, max_functions: int = 4096):
        from .wreath import FunctionSpace

        self.space = FunctionSpace(range(m), B, max_functions)
        self.m, self.B = m, B
        dig = self.space.digits
        w = self.space.weights
        self.mul = B.table[dig[:, None, :], dig[None, :, :]] @ w
        self.ldiv = B.ldiv_table[dig[:, None, :], dig[None, :, :]] @ w
        self.rdiv = B.rdiv_table[dig[:, None, :], dig[None, :, :]] @ w
        self.const = [int(np.full(m, b) @ w) for b in range(B.order)]

    def W(self, S: int, Q: int) -> int:
        """Mask over function indices of {f : f(S) inside Q}."""
        dig = self.space.digits
        pts = members(S)
        qmask = np.zeros(self.B.order, dtype=bool)
        qmask[members(Q)] = True
        ok = qmask[dig[:, pts]].all(axis=1)
        return to_mask(np.flatnonzero(ok).tolist())

    def image(self, tab, X: int, Y: int) -> int:
        xs, ys = members(X), members(Y)
        if not xs or not ys:
            return 0
        return to_mask(np.unique(tab[np.ix_(xs, ys)]).tolist())


def w_set(V: int | Sequence, B: FiniteBinarySystem, S: Iterable[int], Q: Iterable[int], *,
          max_functions: int = 4096) -> frozenset[int]:
    """W(S, Q) = {f in B^V : f(S) inside Q} as function indices.

    V is a point count or a point list; S lists points of V, Q elements of B.
    """
    pts = list(range(V)) if isinstance(V, int) else list(V)
    pos = {v: k for k, v in enumerate(pts)}
    S, Q = list(S), list(Q)
    if not S or not Q:
        raise InputError("S and Q must be nonempty")
    try:
        smask = to_mask(pos[s] for s in S)
    except KeyError as exc:
        raise InputError(f"{exc.args[0]} is not a point of V") from None
    F = _Functions(len(pts), B, max_functions)
    return frozenset(members(F.W(smask, to_mask(Q))))


def _subfamily_meets(masks: list[int], full: int) -> list[int]:
    """meet[fam] for every bitmask fam over ``masks`` (meet[0] = full)."""
    out = [full] * (1 << len(masks))
    for fam in range(1, 1 << len(masks)):
        low = fam & -fam
        out[fam] = out[fam ^ low] & masks[low.bit_length() - 1]
    return out


def _subfamily_joins(masks: list[int]) -> list[int]:
    out = [0] * (1 << len(masks))
    for fam in range(1, 1 << len(masks)):
        low = fam & -fam
        out[fam] = out[fam ^ low] | masks[low.bit_length() - 1]
    return out


MAX_FAMILY_SETS = 15


def _first_family_mismatch(sets, images, combine, unit, lhs_of, full):
    """First family of ``sets`` whose combined set's image differs from the meet of images.

    ``lhs_of(combined)`` returns the image of the combined set, or None to skip
    the family (an empty intersection).  Every nonempty subfamily is tried when
    there are at most MAX_FAMILY_SETS sets; otherwise only families of one or
    two sets, which is enough because both sides are built by iterated binary
    operations.
    """
    k = len(sets)
    if k <= MAX_FAMILY_SETS:
        comb = _subfamily_joins(sets) if unit == 0 else _subfamily_meets(sets, unit)
        meets = _subfamily_meets(images, full)
        for fam in range(1, 1 << k):
            lhs = lhs_of(comb[fam])
            if lhs is not None and lhs != meets[fam]:
                return [sets[i] for i in range(k) if fam >> i & 1]
        return None
    for i in range(k):
        for j in range(i, k):
            lhs = lhs_of(combine(sets[i], sets[j]))
            if lhs is not None and lhs != images[i] & images[j]:
                return [sets[i], sets[j]]
    return None


def verify_function_space_identities(V: int, B: FiniteBinarySystem, *, max_functions: int = 4096) -> Report:
    """Exhaustive check of the six W(S, Q) identities on B^V (V has ``V`` points).

    Items: w_monotone_Q, w_division_by_b, w_pointwise_ops (containments only),
    w_antitone_S, w_union_of_S, w_intersection_of_Q.  Subfamilies in the last
    two range over every nonempty family of nonempty sets while there are at
    most MAX_FAMILY_SETS candidate sets, and over pairs beyond that.
    """
    if not B.is_quasigroup:
        raise PreconditionError("W(S, Q) identities need a quasigroup B")
    m, nb = int(V), B.order
    F = _Functions(m, B, max_functions)
    Ss = list(range(1, 1 << m))
    Qs = list(range(1, 1 << nb))
    W = {(S, Q): F.W(S, Q) for S in Ss for Q in Qs}
    rep = Report(f"W(S,Q) identities on B^V, |V|={m}, |B|={nb}")
    tabB = _SetOps(B)

    w = next(((members(S), members(Q1), members(Q2)) for S in Ss for Q2 in Qs for Q1 in Qs
              if Q1 & ~Q2 == 0 and W[S, Q1] & ~W[S, Q2]), None)
    rep.add("w_monotone_Q", w is None, w)

    w = None
    for b in range(nb):
        cb = F.const[b]
        for S in Ss:
            for Q in Qs:
                bQ = tabB.image(B.rdiv_table, 1 << b, Q)          # b/Q
                Qb = tabB.image(B.ldiv_table, Q, 1 << b)          # Q\b
                if W[S, bQ] != F.image(F.rdiv, 1 << cb, W[S, Q]):
                    w = ("b/Q", b, members(S), members(Q))
                elif W[S, Qb] != F.image(F.ldiv, W[S, Q], 1 << cb):
                    w = ("Q\\b", b, members(S), members(Q))
                if w:
                    break
            if w:
                break
        if w:
            break
    rep.add("w_division_by_b", w is None, w)

    w = None
    strict = total = 0
    for S in Ss:
        for Q in Qs:
            for Q1 in Qs:
                for name, ftab, btab in (("div_l", F.ldiv, B.ldiv_table), ("div_r", F.rdiv, B.rdiv_table),
                                         ("mul", F.mul, B.table)):
                    lhs = F.image(ftab, W[S, Q], W[S, Q1])
                    rhs = W[S, tabB.image(btab, Q, Q1)]
                    total += 1
                    if lhs & ~rhs:
                        w = w or (name, members(S), members(Q), members(Q1))
                    elif lhs != rhs:
                        strict += 1
    rep.add("w_pointwise_ops", w is None, w)
    rep.info["strict containments"] = f"{strict} of {total} cases"

    w = next(((members(S1), members(S2), members(Q)) for S2 in Ss for S1 in Ss for Q in Qs
              if S1 & ~S2 == 0 and W[S2, Q] & ~W[S1, Q]), None)
    rep.add("w_antitone_S", w is None, w)

    full_f = (1 << F.space.size) - 1
    w = None
    for Q in Qs:
        w = _first_family_mismatch(Ss, [W[S, Q] for S in Ss], lambda a, b: a | b, 0,
                                   lambda u: W[u, Q], full_f)
        if w is not None:
            w = (members(Q), [members(x) for x in w])
            break
    rep.add("w_union_of_S", w is None, w)

    w = None
    for S in Ss:
        w = _first_family_mismatch(Qs, [W[S, Q] for Q in Qs], lambda a, b: a & b, (1 << nb) - 1,
                                   lambda q: W[S, q] if q else None, full_f)
        if w is not None:
            w = (members(S), [members(x) for x in w])
            break
    rep.add("w_intersection_of_Q", w is None, w)
    exhaustive = max(len(Ss), len(Qs)) <= MAX_FAMILY_SETS
    rep.info["families"] = ("all subfamilies" if exhaustive else
                            "pairs only; finite families follow by induction")
    return rep
