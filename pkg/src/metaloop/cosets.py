"""Right cosets, transversals and right coset spaces.

A transversal of H in G is a set V of representatives, one per right coset
Hv.  Every d in G then factors uniquely as ``d = psi(d) * tau(d)`` with
``psi(d)`` in H and ``tau(d)`` in V.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import PASS, PreconditionError, Report, StructureError, Verdict
from .magma import FiniteBinarySystem, set_div_l, set_div_r, set_mul
from .structure import Subset, _as_subset, center, is_invariant, is_submetagroup, minimal_t_subgroup


def right_coset(G: FiniteBinarySystem, H, b: int) -> Subset:
    H = _as_subset(G, H)
    return Subset(G, tuple(set_mul(G, H, [b])))


def check_right_coset_shift(G: FiniteBinarySystem, H) -> Verdict:
    """(Hb)a == H(ba) for all a, b; witness is the first failing (a, b)."""
    H = _as_subset(G, H)
    n = G.order
    Hb = [set_mul(G, H, [b]) for b in range(n)]
    for a in range(n):
        for b in range(n):
            if set_mul(G, Hb[b], [a]) != Hb[G.mul(b, a)]:
                return Verdict(False, (a, b))
    return PASS


@dataclass(frozen=True)
class QuotientSpace:
    """The right cosets of H in G, ordered by least member, and pi: G -> coset index."""

    parent: FiniteBinarySystem
    sub: Subset
    cosets: tuple[Subset, ...]
    pi: np.ndarray

    def __len__(self) -> int:
        return len(self.cosets)

    def coset_of(self, g: int) -> int:
        return int(self.pi[g])


def quotient(G: FiniteBinarySystem, H) -> QuotientSpace:
    """Right coset space G/_cH; requires (Hb)a = H(ba) for all a, b."""
    H = _as_subset(G, H)
    cond = check_right_coset_shift(G, H)
    if not cond:
        raise PreconditionError("(Hb)a = H(ba) fails; right cosets need not partition G", cond.witness)
    n = G.order
    pi = np.full(n, -1, dtype=np.int64)
    cosets: list[Subset] = []
    for g in range(n):
        if pi[g] >= 0:
            continue
        c = right_coset(G, H, g)
        if (pi[list(c.members)] >= 0).any() or g not in c:
            raise StructureError("right cosets overlap without coinciding", g)
        pi[list(c.members)] = len(cosets)
        cosets.append(c)
    Q = QuotientSpace(G, H, tuple(cosets), pi)
    eqv = coset_equality_criterion(Q)
    if not eqv:
        raise StructureError("Ha = Hb <=> H(b/a) = H fails", eqv.witness)
    return Q


def coset_equality_criterion(Q: QuotientSpace) -> Verdict:
    """Ha = Hb iff H(b/a) = H, for all a, b (loops only; vacuous otherwise)."""
    G = Q.parent
    if G.identity is None:
        return PASS
    h_coset = Q.pi[G.identity]
    pi = Q.pi
    same = pi[:, None] == pi[None, :]
    to_h = pi[G.rdiv_table.T] == h_coset  # [a, b] -> pi(b/a) == pi(e)
    bad = np.argwhere(same != to_h)
    return Verdict(False, tuple(int(x) for x in bad[0])) if len(bad) else PASS


@dataclass(frozen=True)
class Transversal:
    parent: FiniteBinarySystem
    sub: Subset
    reps: tuple[int, ...]
    psi: np.ndarray
    tau: np.ndarray

    def nu(self, a: int, c: int) -> int:
        """Induced action of G on V: tau(tau(a) * c)."""
        return int(self.tau[self.parent.mul(int(self.tau[a]), c)])


def transversal(G: FiniteBinarySystem, H, reps: Sequence[int] | None = None) -> Transversal:
    """Transversal of H in G; least member of each coset unless ``reps`` is given.

    psi(d) = d / tau(d).
    """
    Q = quotient(G, H)
    if reps is None:
        reps = tuple(c.members[0] for c in Q.cosets)
    else:
        reps = tuple(int(v) for v in reps)
        hit = sorted(int(Q.pi[v]) for v in reps)
        if hit != list(range(len(Q))):
            raise PreconditionError("representatives do not meet every right coset exactly once", hit)
    rep_of = np.empty(len(Q), dtype=np.int64)
    for v in reps:
        rep_of[Q.pi[v]] = v
    tau = rep_of[Q.pi]
    psi = G.rdiv_table[np.arange(G.order), tau]
    hmask = Q.sub.mask
    if not hmask[psi].all():
        d = int(np.flatnonzero(~hmask[psi])[0])
        raise StructureError("d / tau(d) is not in H", d)
    psi.setflags(write=False)
    tau.setflags(write=False)
    return Transversal(G, Q.sub, reps, psi, tau)


def nu(Tr: Transversal, a: int, c: int) -> int:
    return Tr.nu(a, c)


def check_transversal(Tr: Transversal) -> Report:
    """Partition, factorisation d = psi(d)tau(d), idempotence, and the e-identities."""
    G = Tr.parent
    e = G.identity
    rep = Report("transversal")
    seen: set[int] = set()
    overlap = None
    for v in Tr.reps:
        c = set_mul(G, Tr.sub, [v])
        if seen & c and overlap is None:
            overlap = v
        seen |= c
    rep.add("cover", len(seen) == G.order, sorted(set(range(G.order)) - seen)[:1] or None)
    rep.add("disjoint", overlap is None, overlap)
    n = np.arange(G.order)
    _first_bad(rep, "factorization", G.table[Tr.psi, Tr.tau] != n)
    _first_bad(rep, "psi_idempotent", Tr.psi[Tr.psi] != Tr.psi)
    _first_bad(rep, "tau_idempotent", Tr.tau[Tr.tau] != Tr.tau)
    if e is not None:
        _first_bad(rep, "psi_of_tau_is_e", Tr.psi[Tr.tau] != e)
        _first_bad(rep, "tau_of_psi_is_e", Tr.tau[Tr.psi] != e)
    return rep


def _first_bad(rep: Report, name: str, bad: np.ndarray) -> None:
    idx = np.flatnonzero(bad)
    rep.add(name, len(idx) == 0, int(idx[0]) if len(idx) else None)


def right_translation(Q: QuotientSpace, b: int) -> tuple[int, ...]:
    """S_b on coset indices: Hg -> H(gb), checked well defined and inverted by Hg -> H(g/b)."""
    G = Q.parent
    k = len(Q)
    S = np.full(k, -1, dtype=np.int64)
    Sinv = np.full(k, -1, dtype=np.int64)
    for i, c in enumerate(Q.cosets):
        imgs = {int(Q.pi[G.mul(g, b)]) for g in c}
        pre = {int(Q.pi[G.div_r(g, b)]) for g in c}
        if len(imgs) != 1 or len(pre) != 1:
            raise StructureError("right translation is not well defined on cosets", (b, i))
        S[i], Sinv[i] = imgs.pop(), pre.pop()
    ident = np.arange(k)
    if not (np.array_equal(Sinv[S], ident) and np.array_equal(S[Sinv], ident)):
        raise StructureError("right translation is not a bijection", b)
    return tuple(int(x) for x in S)


def check_translation_commutes(Q: QuotientSpace) -> Verdict:
    """pi(R_b g) == S_b(pi(g)) for all b, g; witness (b, g)."""
    G = Q.parent
    for b in range(G.order):
        S = np.array(right_translation(Q, b))
        lhs = Q.pi[G.table[:, b]]
        rhs = S[Q.pi]
        bad = np.flatnonzero(lhs != rhs)
        if len(bad):
            return Verdict(False, (b, int(bad[0])))
    return PASS


def quotient_structure(Q: QuotientSpace) -> FiniteBinarySystem:
    """Induced multiplication (Hg)(Hk) := H(gk) on an invariant H."""
    G = Q.parent
    inv = is_invariant(G, Q.sub)
    if not inv:
        raise PreconditionError("subset is not invariant; quotient multiplication undefined", inv.witness)
    prod = Q.pi[G.table]  # [g, k] -> coset of gk
    k = len(Q)
    table = np.full((k, k), -1, dtype=np.int64)
    for g in range(G.order):
        for h in range(G.order):
            i, j = Q.pi[g], Q.pi[h]
            if table[i, j] < 0:
                table[i, j] = prod[g, h]
            elif table[i, j] != prod[g, h]:
                raise PreconditionError("(Hg)(Hk) depends on the representatives", (g, h))
    names = None
    if G.names:
        names = ["{" + ",".join(G.name(x) for x in c) + "}" for c in Q.cosets]
    T = FiniteBinarySystem(table, names, normalize=False)
    return T


def is_homomorphism(f: Sequence[int] | np.ndarray, G: FiniteBinarySystem, K: FiniteBinarySystem) -> Verdict:
    """f(gh) == f(g)f(h) for all g, h; witness (g, h)."""
    f = np.asarray(f)
    bad = np.argwhere(f[G.table] != K.table[np.ix_(f, f)])
    return Verdict(False, tuple(int(x) for x in bad[0])) if len(bad) else PASS


# nested transversals --------------------------------------------------------

def check_nested_transversals(G: FiniteBinarySystem, A, C1) -> Report:
    """Nested transversals for A inside AC1 inside G, and the psi/tau identities.

    V_{AC1,A} is taken as a transversal of C1 ∩ A in C1, V_{G,AC1} by least
    members, and V_{G,A} := V_{AC1,A} V_{G,AC1}.  Then checks (for all d in G,
    gamma in C1)::

        psi_A(d)        == psi^{AC1}_A(psi_{AC1}(d))
        tau_A(d)        == tau^{AC1}_A(psi_{AC1}(d)) * tau_{AC1}(d)
        V_{C1,C1∩A} V_{G,AC1} == V_{G,A},  V_{C1,C1∩A} == V_{AC1,A}
        psi(psi(d) gamma) == psi(d) psi(gamma),  tau(psi(d) gamma) == tau(gamma)
    """
    A = _as_subset(G, A)
    C1 = _as_subset(G, C1)
    sub = is_submetagroup(G, A)
    if not sub:
        raise PreconditionError("A is not a submetagroup", sub.witness)
    ctr = center(G).set
    if not C1.set <= ctr or not is_submetagroup(G, C1):
        raise PreconditionError("C1 is not a subgroup of the center", sorted(C1.set - ctr))
    tmin = minimal_t_subgroup(G).set
    if not tmin <= C1.set:
        raise PreconditionError("C1 does not contain the associator subgroup", sorted(tmin - C1.set))
    AC1 = Subset(G, tuple(set_mul(G, A, C1)))
    sub = is_submetagroup(G, AC1)
    if not sub:
        raise PreconditionError("A*C1 is not closed", sub.witness)

    C1A = Subset(G, tuple(C1.set & A.set))
    C1_sys, to_c1, from_c1 = restrict(G, C1)
    v_c1 = transversal(C1_sys, [to_c1[x] for x in C1A])
    V_small = tuple(from_c1[v] for v in v_c1.reps)

    rep = Report("nested transversals (A in AC1 in G)")
    AC1_sys, to_ac1, from_ac1 = restrict(G, AC1)
    tr_outer = transversal(G, AC1)
    V_big = sorted({G.mul(g, v) for g in V_small for v in tr_outer.reps})
    try:
        tr_inner = transversal(AC1_sys, [to_ac1[x] for x in A], [to_ac1[v] for v in V_small])
    except PreconditionError as exc:
        rep.add("V_inner_is_transversal", False, exc.witness)
        return rep
    rep.add("V_inner_is_transversal", True)
    try:
        tr = transversal(G, A, V_big)
    except PreconditionError as exc:
        rep.add("V_product_is_transversal", False, exc.witness)
        return rep
    rep.add("V_product_is_transversal", True)

    inner_psi = np.array([from_ac1[int(tr_inner.psi[to_ac1[x]])] if x in to_ac1 else -1 for x in range(G.order)])
    inner_tau = np.array([from_ac1[int(tr_inner.tau[to_ac1[x]])] if x in to_ac1 else -1 for x in range(G.order)])

    rep.info["|AC1|"] = len(AC1)
    rep.info["V_{C1,C1∩A}"] = list(V_small)
    rep.info["|V_{G,A}|"] = len(tr.reps)
    d = np.arange(G.order)
    _first_bad(rep, "psi_composition", tr.psi != inner_psi[tr_outer.psi])
    _first_bad(rep, "tau_composition", tr.tau != G.table[inner_tau[tr_outer.psi], tr_outer.tau])
    prodset = {G.mul(g, v) for g in V_small for v in tr_outer.reps}
    rep.add("V_product", prodset == set(tr.reps)
            and len(prodset) == len(V_small) * len(tr_outer.reps), None)
    rep.add("V_inner_in_V", set(V_small) <= set(tr.reps), sorted(set(V_small) - set(tr.reps)))
    bad = None
    bad_tau = None
    for x in d:
        for gamma in C1:
            y = G.mul(int(tr.psi[x]), gamma)
            if bad is None and tr.psi[y] != G.mul(int(tr.psi[x]), int(tr.psi[gamma])):
                bad = (int(x), gamma)
            if bad_tau is None and tr.tau[y] != tr.tau[gamma]:
                bad_tau = (int(x), gamma)
    rep.add("psi_shift_by_C1", bad is None, bad)
    rep.add("tau_shift_by_C1", bad_tau is None, bad_tau)
    return rep


def restrict(G: FiniteBinarySystem, S) -> tuple[FiniteBinarySystem, dict[int, int], list[int]]:
    """Closed subset S as a structure in its own right, with index maps both ways."""
    S = _as_subset(G, S)
    members = list(S.members)
    to_local = {g: i for i, g in enumerate(members)}
    try:
        table = [[to_local[G.mul(a, b)] for b in members] for a in members]
    except KeyError:
        raise PreconditionError("subset is not closed under multiplication") from None
    names = [G.name(g) for g in members] if G.names else None
    # e is the least member after normalisation, so no relabelling happens
    return FiniteBinarySystem(table, names, normalize=False), to_local, members


def disjointness_equivalence(G: FiniteBinarySystem, A, B, C) -> Verdict:
    """(AB)∩C = ∅  <=>  A∩(C/B) = ∅  <=>  (A\\C)∩B = ∅ (each clause evaluated separately).

    Witness is the triple of booleans when they disagree.
    """
    A, B, C = set(A), set(B), set(C)
    first = not (set_mul(G, A, B) & C)
    second = not (A & set_div_r(G, C, B))
    third = not (set_div_l(G, A, C) & B)
    return Verdict(first == second == third, (first, second, third))
