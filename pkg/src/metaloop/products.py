"""Direct products and smashed twisted products on the carrier A x B.

The pair (a, b) has index ``a * |B| + b``, so (e_A, e_B) is 0.  The smashed
twisted product multiplies as::

    (a1, b1)(a2, b2) = (a1 a2, (b1 * phi(a1)(b2)) * xi((a1, b1), (a2, b2)))

With xi taking central values the placement of xi is immaterial.  The
factors eta and kappa do not enter the multiplication; they are checked
against the identities they must satisfy (see :func:`validate_factors`).
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .cosets import check_right_coset_shift, quotient, transversal
from .errors import FactorRejected, InputError, PASS, PreconditionError, Report, StructureError, Verdict
from .magma import FiniteBinarySystem, set_mul
from .structure import (
    Subset, center, closure, is_almost_invariant, is_invariant, is_submetagroup, minimal_t_subgroup,
)


@dataclass
class SmashingFactors:
    """Factor data (phi, eta, kappa, xi) for a smashed twisted product of A by B.

    Arrays are indexed by element indices::

        phi[a, b]            = phi(a)(b)            shape (|A|, |B|)
        eta[a1, a2, b]                               shape (|A|, |A|, |B|)
        kappa[a, b1, b2]                             shape (|A|, |B|, |B|)
        xi[a1, b1, a2, b2]   = xi((a1,b1),(a2,b2))  shape (|A|, |B|, |A|, |B|)

    Missing factors default to trivial ones (phi(a) = id, the rest e).  ``C``
    defaults to the subgroup generated by the associators of B and the values
    of eta, kappa and xi.
    """

    A: FiniteBinarySystem
    B: FiniteBinarySystem
    phi: np.ndarray | None = None
    eta: np.ndarray | None = None
    kappa: np.ndarray | None = None
    xi: np.ndarray | None = None
    C: Subset | None = field(default=None)

    def __post_init__(self):
        A, B = self.A, self.B
        if not (A.is_loop and B.is_loop):
            raise InputError("smashing factors need loops A and B")
        na, nb = A.order, B.order
        self.phi = _arr(self.phi, (na, nb), lambda: np.tile(np.arange(nb), (na, 1)), "phi", nb)
        self.eta = _arr(self.eta, (na, na, nb), None, "eta", nb)
        self.kappa = _arr(self.kappa, (na, nb, nb), None, "kappa", nb)
        self.xi = _arr(self.xi, (na, nb, na, nb), None, "xi", nb)
        if self.C is None:
            vals = set(np.unique(self.xi).tolist()) | set(np.unique(self.eta).tolist()) \
                | set(np.unique(self.kappa).tolist()) | set(minimal_t_subgroup(B).members)
            self.C = closure(B, vals)
        elif not isinstance(self.C, Subset):
            self.C = Subset.of(B, self.C)

    @classmethod
    def trivial(cls, A: FiniteBinarySystem, B: FiniteBinarySystem) -> "SmashingFactors":
        return cls(A, B)


def _arr(x, shape, default, name, bound):
    if x is None:
        return default() if default is not None else np.zeros(shape, dtype=np.int64)
    try:
        arr = np.array(x, dtype=np.int64)
    except (TypeError, ValueError):
        raise InputError(f"{name} is not a rectangular integer array") from None
    if arr.shape != shape:
        raise InputError(f"{name} has shape {arr.shape}, expected {shape}")
    bad = np.argwhere((arr < 0) | (arr >= bound))
    if len(bad):
        raise InputError(f"{name}{list(map(int, bad[0]))} out of range", tuple(map(int, bad[0])))
    arr.setflags(write=False)
    return arr


def _pair_names(A: FiniteBinarySystem, B: FiniteBinarySystem) -> list[str] | None:
    if not (A.names or B.names):
        return None
    return [f"({A.name(a)},{B.name(b)})" for a in range(A.order) for b in range(B.order)]


def direct_product(A: FiniteBinarySystem, B: FiniteBinarySystem) -> FiniteBinarySystem:
    na, nb = A.order, B.order
    a = np.arange(na).repeat(nb)
    b = np.tile(np.arange(nb), na)
    table = A.table[np.ix_(a, a)] * nb + B.table[np.ix_(b, b)]
    return FiniteBinarySystem(table, _pair_names(A, B), normalize=False)


def smashed_twisted_product(F: SmashingFactors) -> FiniteBinarySystem:
    """Table of A *^{phi,eta,kappa,xi} B; raises FactorRejected if not a quasigroup."""
    A, B = F.A, F.B
    na, nb = A.order, B.order
    a = np.arange(na).repeat(nb)
    b = np.tile(np.arange(nb), na)
    a1, a2 = a[:, None], a[None, :]
    b1, b2 = b[:, None], b[None, :]
    bpart = B.table[B.table[b1, F.phi[a1, b2]], F.xi[a1, b1, a2, b2]]
    table = A.table[a1, a2] * nb + bpart
    G = FiniteBinarySystem(table, _pair_names(A, B), normalize=False)
    clash = latin_collision(G.table)
    if clash is not None:
        raise FactorRejected("smashed product is not a quasigroup", clash)
    return G


def latin_collision(table: np.ndarray):
    """First (g, h1, h2) with g h1 == g h2, or ("col", h, g1, g2) with g1 h == g2 h."""
    n = table.shape[0]
    for g in range(n):
        row = table[g]
        if len(np.unique(row)) < n:
            first: dict[int, int] = {}
            for h in range(n):
                v = int(row[h])
                if v in first:
                    return (g, first[v], h)
                first[v] = h
    for h in range(n):
        col = table[:, h]
        if len(np.unique(col)) < n:
            first = {}
            for g in range(n):
                v = int(col[g])
                if v in first:
                    return ("col", h, first[v], g)
                first[v] = g
    return None


def validate_factors(F: SmashingFactors) -> Report:
    """Itemised check of the conditions the factor system must meet.

    * ``C_central``: C is a subgroup of the center of B
    * ``values_in_C``: eta, kappa and xi take values in C
    * ``phi_identity``: phi(e) is the identity map
    * ``xi_b_independent``: xi((e,b),(a,e)) does not depend on b
    * ``kappa_defect``: phi(a)(b3 b2) == (phi(a)b3 phi(a)b2) kappa(a,b3,b2)
    * ``eta_consistency``: b == phi(e/a)(phi(a)b) / eta(e/a, a, phi(e/a)(phi(a)b))
    * ``result_loop``: the product table is a loop (the admissibility verdict)
    """
    A, B = F.A, F.B
    rep = Report("smashing factors")
    cset = F.C.set
    ctr = center(B).set
    rep.add("C_central", cset <= ctr and bool(is_submetagroup(B, F.C)), sorted(cset - ctr)[:1] or None)

    cmask = F.C.mask
    bad_val = None
    for name in ("xi", "eta", "kappa"):
        arr = getattr(F, name)
        bad = np.argwhere(~cmask[arr])
        if len(bad):
            bad_val = (name,) + tuple(int(x) for x in bad[0])
            break
    rep.add("values_in_C", bad_val is None, bad_val)

    nb = B.order
    ident = np.arange(nb)
    bad = np.flatnonzero(F.phi[0] != ident)
    rep.add("phi_identity", len(bad) == 0, int(bad[0]) if len(bad) else None)

    col = F.xi[0, :, :, 0]  # [b, a] -> xi((e,b),(a,e))
    bad = np.argwhere(col != col[0][None, :])
    rep.add("xi_b_independent", len(bad) == 0, (int(bad[0][1]), int(bad[0][0])) if len(bad) else None)

    t = B.table
    lhs = F.phi[:, t]                                            # [a, b3, b2] -> phi(a)(b3 b2)
    rhs = t[t[F.phi[:, :, None], F.phi[:, None, :]], F.kappa]   # (phi(a)b3 phi(a)b2) kappa
    bad = np.argwhere(lhs != rhs)
    rep.add("kappa_defect", len(bad) == 0, tuple(int(x) for x in bad[0]) if len(bad) else None)

    bad_eta = None
    for a in range(A.order):
        ainv = A.div_r(0, a)
        for b in range(nb):
            y = int(F.phi[ainv, F.phi[a, b]])
            if B.div_r(y, int(F.eta[ainv, a, y])) != b:
                bad_eta = (a, b)
                break
        if bad_eta:
            break
    rep.add("eta_consistency", bad_eta is None, bad_eta)

    try:
        G = smashed_twisted_product(F)
    except FactorRejected as exc:
        rep.add("result_loop", False, exc.witness)
        return rep
    rep.add("result_loop", G.is_loop, None if G.is_loop else "no two-sided identity")
    rep.info["class"] = G.class_tag
    return rep


# structure of the product ---------------------------------------------------

def theta_A(F: SmashingFactors, a: int) -> int:
    return a * F.B.order


def theta_B(F: SmashingFactors, b: int) -> int:
    return b


def embedded_B(G: FiniteBinarySystem, F: SmashingFactors) -> Subset:
    return Subset(G, tuple(range(F.B.order)))


def embedded_A(G: FiniteBinarySystem, F: SmashingFactors) -> Subset:
    return Subset(G, tuple(theta_A(F, a) for a in range(F.A.order)))


def _hom_verdict(G, src: FiniteBinarySystem, emb: np.ndarray) -> Verdict:
    bad = np.argwhere(G.table[np.ix_(emb, emb)] != emb[src.table])
    return Verdict(False, tuple(int(x) for x in bad[0])) if len(bad) else PASS


def embeddings_and_invariance(G: FiniteBinarySystem, F: SmashingFactors) -> Report:
    """Embeddings theta_A, theta_B, invariance of theta_B(B), and V_{G,B} = theta_A(A).

    theta_A is generally not multiplicative (xi((a1,e),(a2,e)) need not be e);
    that check is reported under ``info`` only.
    """
    rep = Report("embeddings and invariance")
    embA = np.array([theta_A(F, a) for a in range(F.A.order)])
    embB = np.array([theta_B(F, b) for b in range(F.B.order)])
    H = embedded_B(G, F)
    rep.add("theta_A_injective", len(set(embA.tolist())) == len(embA))
    rep.add("theta_B_injective", len(set(embB.tolist())) == len(embB))
    rep.add("theta_B_homomorphism", _hom_verdict(G, F.B, embB))
    rep.add("theta_B_submetagroup", is_submetagroup(G, H))
    rep.add("right_coset_shift", check_right_coset_shift(G, H))
    rep.add("almost_invariant", is_almost_invariant(G, H))

    n = G.order
    Hg = [set_mul(G, H, [g]) for g in range(n)]
    gH = [set_mul(G, [g], H) for g in range(n)]
    bad = None
    for g1 in range(n):
        for g2 in range(n):
            if set_mul(G, gH[g1], [g2]) != set_mul(G, [g1], Hg[g2]):
                bad = (g1, g2)
                break
        if bad:
            break
    rep.add("mixed_associativity", bad is None, bad)
    rep.add("theta_B_invariant", is_invariant(G, H))

    try:
        transversal(G, H, embA.tolist())
        rep.add("theta_A_transversal", True)
    except (PreconditionError, StructureError) as exc:
        rep.add("theta_A_transversal", False, exc.witness)
    rep.add("psi_tau_partition", psi_tau_partition_matches(G, F))

    hA = _hom_verdict(G, F.A, embA)
    rep.info["theta_A_homomorphism"] = "yes" if hA else f"no, first failure {hA.witness}"
    embA_img = embedded_A(G, F)
    rep.info["theta_A_image_closed"] = bool(is_submetagroup(G, embA_img))
    return rep


def psi_tau_product(G: FiniteBinarySystem, F: SmashingFactors, g: int) -> tuple[int, int]:
    """(g^psi, g^tau) = ((e, b), (a1, e)) with b = b1 / xi((e,b1),(a1,e))."""
    nb = F.B.order
    a1, b1 = divmod(int(g), nb)
    b = F.B.div_r(b1, int(F.xi[0, b1, a1, 0]))
    psi, tau = theta_B(F, b), theta_A(F, a1)
    if G.mul(psi, tau) != g:
        raise StructureError("g != g^psi g^tau: factor system inconsistent", g)
    return psi, tau


def psi_tau_partition_matches(G: FiniteBinarySystem, F: SmashingFactors) -> Verdict:
    """Fibres of g -> g^tau coincide with the right cosets of theta_B(B)."""
    Q = quotient(G, embedded_B(G, F))
    fibres: dict[int, set[int]] = {}
    for g in range(G.order):
        try:
            _, tau = psi_tau_product(G, F, g)
        except StructureError:
            return Verdict(False, g)
        fibres.setdefault(tau, set()).add(g)
    ours = sorted(tuple(sorted(s)) for s in fibres.values())
    theirs = sorted(c.members for c in Q.cosets)
    if ours != theirs:
        diff = next((a for a, b in zip(ours, theirs) if a != b), None)
        return Verdict(False, diff)
    return PASS


# iterated construction -------------------------------------------------------

@dataclass
class Composition:
    """D = A' * B with A' = A1 * B1, B = A2 * B2, and the distinguished pieces of D."""

    A_prime: FiniteBinarySystem
    B: FiniteBinarySystem
    D: FiniteBinarySystem
    factors: SmashingFactors
    A_sub: Subset        # theta_{A2}(A2) inside D
    C1: Subset           # theta_{B2}(B2) inside D
    report: Report


def compose_smashed(F1: SmashingFactors, F2: SmashingFactors, *, phi3=None, eta3=None,
                    kappa3=None, xi3=None) -> Composition:
    """Iterate the construction: D = (A1 * B1) * (A2 * B2).

    Hypotheses checked (PreconditionError names the failing clause):
    ``B1 == B2``, ``phi2 trivial`` (phi2(a)b = b for all a in A2),
    ``xi2 symmetric`` (xi2((a,e),(e,b)) == xi2((e,b),(a,e))), and that
    C'1 = theta_{B2}(B2) is central in B.
    """
    if F1.B != F2.B:
        raise PreconditionError("B1 == B2 fails", None)
    nb2 = F2.B.order
    bad = np.argwhere(F2.phi != np.arange(nb2)[None, :])
    if len(bad):
        raise PreconditionError("phi2 trivial fails", tuple(int(x) for x in bad[0]))
    sym = F2.xi[:, 0, 0, :] != F2.xi[0, :, :, 0].T   # [a, b]
    bad = np.argwhere(sym)
    if len(bad):
        raise PreconditionError("xi2 symmetric fails", tuple(int(x) for x in bad[0]))

    A_prime = smashed_twisted_product(F1)
    B = smashed_twisted_product(F2)
    C1_in_B = Subset(B, tuple(range(nb2)))
    if not C1_in_B.set <= center(B).set:
        raise PreconditionError("theta_{B2}(B2) is not central in B", sorted(C1_in_B.set - center(B).set))
    F3 = SmashingFactors(A_prime, B, phi3, eta3, kappa3, xi3, C=C1_in_B)
    D = smashed_twisted_product(F3)

    nB = B.order
    nb1 = F1.B.order
    A_sub = Subset(D, tuple(a2 * nb2 for a2 in range(F2.A.order)))
    C1 = Subset(D, tuple(range(nb2)))
    theta_A1 = [(a1 * nb1) * nB for a1 in range(F1.A.order)]
    theta_B1 = [b1 * nB for b1 in range(nb1)]

    rep = Report("iterated smashed product")
    rep.add("D_is_loop", D.is_loop)
    bad = next((x for x in C1 if set_mul(D, [x], A_sub) != set_mul(D, A_sub, [x])), None)
    rep.add("xA_equals_Ax", bad is None, bad)
    rep.add("C1_invariant", is_invariant(D, C1))
    threefold = set_mul(D, set_mul(D, theta_A1, A_sub), theta_B1)
    rep.info["a1*a2*b covers"] = f"{len(threefold)} of {D.order} elements"
    fourfold = set_mul(D, set_mul(D, set_mul(D, theta_A1, A_sub), theta_B1), C1)
    missing = sorted(set(range(D.order)) - fourfold)
    rep.add("presentation_a1_a2_b1_b2", not missing, missing[:1] or None)
    return Composition(A_prime, B, D, F3, A_sub, C1, rep)
