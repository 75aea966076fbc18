"""Smashed twisted wreath products C = D x B^V over a transversal V of A in D.

Functions V -> B are stored by mixed-radix index over the ordered list V
(first point most significant), so the constant-e function is index 0 and the
element (d, f) of C has index ``d * |B|**|V| + f``.

Multiplication::

    (d1, f1)(d, f) = (d1 d, v -> (f1(v) f^{d1}(v)) xi((psi d1, f1(v)), (psi d, f(v))))
    f^{d}(v)       = phi(s(d, v)) f(v^[d\\e]),   v^[c] = tau(v c),   s(d, v) = psi(v (d\\e))

``phi`` and ``xi`` are indexed by the position of an element of A in the sorted
member list of A.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .cosets import Transversal, transversal
from .errors import FactorRejected, InputError, PreconditionError, Report, ResourceError
from .magma import FiniteBinarySystem
from .products import latin_collision
from .structure import Subset, center, is_submetagroup

DEFAULT_MAX_FUNCTIONS = 4096


class FunctionSpace:
    """All maps V -> B, indexed big-endian in base |B|."""

    def __init__(self, V: Sequence[int], B: FiniteBinarySystem, max_functions: int = DEFAULT_MAX_FUNCTIONS):
        self.V = tuple(int(v) for v in V)
        self.B = B
        m, nb = len(self.V), B.order
        size = nb ** m
        if size > max_functions:
            raise ResourceError(f"|B|^|V| = {nb}^{m} = {size} exceeds the bound {max_functions}", size)
        self.size = size
        self.weights = nb ** np.arange(m - 1, -1, -1, dtype=np.int64)
        idx = np.arange(size, dtype=np.int64)
        self.digits = (idx[:, None] // self.weights[None, :]) % nb   # [f, k] -> f(V[k])
        self.digits.setflags(write=False)
        self.position = {v: k for k, v in enumerate(self.V)}

    def __len__(self) -> int:
        return self.size

    def encode(self, values) -> int:
        vals = np.asarray(values, dtype=np.int64)
        if vals.shape != (len(self.V),) or ((vals < 0) | (vals >= self.B.order)).any():
            raise InputError(f"function values {list(vals)} do not fit V -> B")
        return int(vals @ self.weights)

    def decode(self, f: int) -> tuple[int, ...]:
        return tuple(int(x) for x in self.digits[f])

    def value(self, f: int, v: int) -> int:
        return int(self.digits[f, self.position[v]])

    def pointwise_mul(self, f1: int, f2: int) -> int:
        return self.encode(self.B.table[self.digits[f1], self.digits[f2]])

    def pointwise_div_l(self, f1: int, f2: int) -> int:
        return self.encode(self.B.ldiv_table[self.digits[f1], self.digits[f2]])

    def pointwise_div_r(self, f1: int, f2: int) -> int:
        return self.encode(self.B.rdiv_table[self.digits[f1], self.digits[f2]])


@dataclass
class WreathSpec:
    """Input data: D, the submetagroup A, B, phi, pointwise xi and C1 <= center(B).

    ``phi[i, b]`` is phi(A[i])(b); ``xi[i1, b1, i2, b2]`` is
    xi((A[i1], b1), (A[i2], b2)).  ``V`` defaults to the least-member
    transversal.  ``eta`` and ``kappa`` are carried along but do not enter the
    multiplication.
    """

    D: FiniteBinarySystem
    A: Sequence[int]
    B: FiniteBinarySystem
    phi: np.ndarray | None = None
    xi: np.ndarray | None = None
    C1: Sequence[int] | None = None
    V: Sequence[int] | None = None
    eta: np.ndarray | None = None
    kappa: np.ndarray | None = None


@dataclass
class WreathStructure:
    D: FiniteBinarySystem
    A: Subset
    Tr: Transversal
    B: FiniteBinarySystem
    space: FunctionSpace
    phi: np.ndarray
    xi: np.ndarray
    C1: Subset
    product: FiniteBinarySystem
    actions: np.ndarray    # actions[d, f] = f^{d}

    @property
    def V(self) -> tuple[int, ...]:
        return self.Tr.reps

    def pair(self, g: int) -> tuple[int, int]:
        return divmod(int(g), self.space.size)

    def index(self, d: int, f: int) -> int:
        return int(d) * self.space.size + int(f)


def _a_pos(D: FiniteBinarySystem, A: Subset) -> np.ndarray:
    pos = np.full(D.order, -1, dtype=np.int64)
    pos[list(A.members)] = np.arange(len(A))
    return pos


def _action_table(D, Tr: Transversal, A: Subset, space: FunctionSpace, phi: np.ndarray) -> np.ndarray:
    """actions[d, f] = index of f^{d}."""
    apos = _a_pos(D, A)
    V = Tr.reps
    e = D.identity
    out = np.empty((D.order, space.size), dtype=np.int64)
    for d in range(D.order):
        c = D.div_l(d, e)
        src = []
        s = []
        for v in V:
            x = D.mul(v, c)
            src.append(space.position[int(Tr.tau[x])])
            s.append(int(apos[Tr.psi[x]]))
        vals = phi[np.array(s)[None, :], space.digits[:, src]]   # [f, k]
        out[d] = vals @ space.weights
    return out


def f_action(W: WreathStructure, d: int, f: int) -> int:
    """Index of f^{d}: v -> phi(s(d,v)) f(tau(v (d\\e)))."""
    return int(W.actions[d, f])


def _check_spec(spec: WreathSpec):
    D, B = spec.D, spec.B
    if not D.is_loop:
        raise FactorRejected("D is not a loop")
    if not B.is_loop:
        raise FactorRejected("B is not a loop")
    A = Subset.of(D, spec.A)
    sub = is_submetagroup(D, A)
    if not sub:
        raise PreconditionError("A is not a submetagroup of D", sub.witness)
    na, nb = len(A), B.order
    phi = np.tile(np.arange(nb), (na, 1)) if spec.phi is None else np.array(spec.phi, dtype=np.int64)
    xi = np.zeros((na, nb, na, nb), dtype=np.int64) if spec.xi is None else np.array(spec.xi, dtype=np.int64)
    if phi.shape != (na, nb):
        raise InputError(f"phi has shape {phi.shape}, expected {(na, nb)}")
    if xi.shape != (na, nb, na, nb):
        raise InputError(f"xi has shape {xi.shape}, expected {(na, nb, na, nb)}")
    for name, arr in (("phi", phi), ("xi", xi)):
        bad = np.argwhere((arr < 0) | (arr >= nb))
        if len(bad):
            raise InputError(f"{name}{list(map(int, bad[0]))} out of range", tuple(map(int, bad[0])))
    C1 = Subset.of(B, sorted(set(np.unique(xi).tolist()) | {0})) if spec.C1 is None else Subset.of(B, spec.C1)
    if not C1.set <= center(B).set or not is_submetagroup(B, C1):
        raise PreconditionError("C1 is not a subgroup of the center of B", sorted(C1.set - center(B).set))
    bad = np.argwhere(phi[0] != np.arange(nb))
    if len(bad):
        raise PreconditionError("phi(e) is not the identity map", int(bad[0][0]))
    bad = np.flatnonzero(phi[:, 0] != 0)
    if len(bad):
        raise PreconditionError("phi(a) does not fix e", int(bad[0]))
    bad = np.argwhere(np.sort(phi, axis=1) != np.arange(nb)[None, :])
    if len(bad):
        raise PreconditionError("phi(a) is not a permutation of B", int(bad[0][0]))
    bad = np.argwhere(~C1.mask[xi])
    if len(bad):
        raise PreconditionError("xi takes a value outside C1", tuple(map(int, bad[0])))
    if (xi[0, 0] != 0).any() or (xi[:, :, 0, 0] != 0).any():
        w = np.argwhere(xi[0, 0] != 0)
        raise PreconditionError("xi is not normalised at (e, e)", tuple(map(int, w[0])) if len(w) else None)
    return A, phi, xi, C1


def wreath_product(spec: WreathSpec, *, max_functions: int = DEFAULT_MAX_FUNCTIONS) -> WreathStructure:
    """Build the table of C = D x B^V; FactorRejected if the result is not a loop."""
    A, phi, xi, C1 = _check_spec(spec)
    D, B = spec.D, spec.B
    Tr = transversal(D, A, spec.V)
    space = FunctionSpace(Tr.reps, B, max_functions)
    actions = _action_table(D, Tr, A, space, phi)
    apos = _a_pos(D, A)
    psi_pos = apos[Tr.psi]

    nd, nf = D.order, space.size
    dig = space.digits
    bt = B.table
    table = np.empty((nd * nf, nd * nf), dtype=np.int64)
    for d1 in range(nd):
        moved = dig[actions[d1]]                       # [f, k] -> f^{d1}(v_k)
        i1 = psi_pos[d1]
        for d in range(nd):
            i2 = psi_pos[d]
            dd = D.mul(d1, d)
            # [f1, f, k]
            vals = bt[bt[dig[:, None, :], moved[None, :, :]], xi[i1, dig[:, None, :], i2, dig[None, :, :]]]
            table[d1 * nf:(d1 + 1) * nf, d * nf:(d + 1) * nf] = dd * nf + vals @ space.weights
    C = FiniteBinarySystem(table, normalize=False)
    clash = latin_collision(C.table)
    if clash is not None:
        raise FactorRejected("wreath product is not a quasigroup", clash)
    if C.identity != 0:
        raise FactorRejected("(e, const_e) is not a two-sided identity", C.identity)
    return WreathStructure(D, A, Tr, B, space, phi, xi, C1, C, actions)


# transport along automorphisms ---------------------------------------------

def check_automorphism(T: FiniteBinarySystem, p: Sequence[int], name: str = "map") -> np.ndarray:
    """Validate that ``p`` is an automorphism of T (bijective, preserves mul, div_l, div_r)."""
    arr = np.array(p, dtype=np.int64)
    n = T.order
    if arr.shape != (n,) or sorted(arr.tolist()) != list(range(n)):
        raise PreconditionError(f"{name} is not a permutation of {n} elements", None)
    for op, tab in (("mul", T.table), ("div_l", T.ldiv_table), ("div_r", T.rdiv_table)):
        bad = np.argwhere(arr[tab] != tab[np.ix_(arr, arr)])
        if len(bad):
            raise PreconditionError(f"{name} does not preserve {op}", tuple(int(x) for x in bad[0]))
    return arr


@dataclass
class ThetaResult:
    C_ij: WreathStructure
    theta: np.ndarray        # theta[g] for g in C
    report: Report


def theta_isomorphism(W: WreathStructure, i: Sequence[int], j: Sequence[int],
                      c1_embedding: Sequence[int] | None = None) -> ThetaResult:
    """Transport W along automorphisms i of D and j of B.

    The transported data are A' = i(A), V' = i(V) (same order),
    phi'(i a)(j b) = j(phi(a)(b)) and xi'((i a1, j b1), (i a2, j b2)) = j(xi(...)).
    ``theta(d, f) = (i d, f')`` with f'(i v) = j(f(v)).

    i and j must agree on C1: when ``c1_embedding`` maps C1 into D this means
    i(emb c) == emb(j c); without an embedding j has to fix C1 pointwise.
    """
    D, B = W.D, W.B
    i = check_automorphism(D, i, "i")
    j = check_automorphism(B, j, "j")
    if c1_embedding is None:
        bad = [c for c in W.C1 if j[c] != c]
    else:
        emb = dict(zip(W.C1.members, (int(x) for x in c1_embedding)))
        if len(emb) != len(W.C1):
            raise InputError("c1_embedding must list one image per member of C1")
        bad = [c for c in W.C1 if int(i[emb[c]]) != emb.get(int(j[c]), -1)]
    if bad:
        raise PreconditionError("i and j disagree on C1", bad[0])

    A2 = Subset.of(D, [int(i[a]) for a in W.A])
    na, nb = len(W.A), B.order
    # old position -> new position of i(a) in sorted A2
    new_pos = _a_pos(D, A2)[i[list(W.A.members)]]
    phi2 = np.empty_like(W.phi)
    phi2[new_pos[:, None], j[None, :]] = j[W.phi]
    xi2 = np.empty_like(W.xi)
    P1, B1, P2, B2 = np.ix_(new_pos, j, new_pos, j)
    xi2[P1, B1, P2, B2] = j[W.xi]
    spec2 = WreathSpec(D, A2.members, B, phi2, xi2, [int(j[c]) for c in W.C1], [int(i[v]) for v in W.V])
    C2 = wreath_product(spec2, max_functions=max(W.space.size, 1))

    nf = W.space.size
    fmap = j[W.space.digits] @ C2.space.weights     # positions of V and V' correspond
    theta = (i[:, None] * nf + fmap[None, :]).ravel()

    C, C2t = W.product, C2.product
    rep = Report("theta transport")
    rep.add("bijective", len(np.unique(theta)) == len(theta))
    for op, t1, t2 in (("mul", C.table, C2t.table), ("div_l", C.ldiv_table, C2t.ldiv_table),
                       ("div_r", C.rdiv_table, C2t.rdiv_table)):
        bad = np.argwhere(theta[t1] != t2[np.ix_(theta, theta)])
        rep.add(f"preserves_{op}", len(bad) == 0, tuple(int(x) for x in bad[0]) if len(bad) else None)
    if not rep.ok:
        raise PreconditionError("theta is not an isomorphism", rep.failures())
    return ThetaResult(C2, theta, rep)
