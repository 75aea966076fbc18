"""Named example structures.

``cd_basis(k)`` is the signed basis ``{±e_0, ..., ±e_{2^k-1}}`` of the k-th
Cayley-Dickson algebra.  Its table comes from the doubling sign recursion in
:func:`cd_sign`, which never looks at any other table in the package; the
M16 (octonion) claims in the test-suite lean on that independence.

Element ``±e_i`` of ``cd_basis(k)`` has index ``2*i + (0 if + else 1)``.
"""
from __future__ import annotations

from functools import lru_cache
from itertools import permutations

import numpy as np

from .errors import InputError
from .magma import FiniteBinarySystem


def cyclic(n: int) -> FiniteBinarySystem:
    if n < 1:
        raise InputError(f"cyclic order must be >= 1, got {n}")
    idx = np.arange(n)
    return FiniteBinarySystem((idx[:, None] + idx[None, :]) % n, [f"{i}" for i in range(n)])


def klein() -> FiniteBinarySystem:
    idx = np.arange(4)
    return FiniteBinarySystem(idx[:, None] ^ idx[None, :], ["e", "a", "b", "ab"])


def symmetric(k: int) -> FiniteBinarySystem:
    """S_k with composition (p*q)(x) = p(q(x)); identity permutation first."""
    if k < 1:
        raise InputError(f"symmetric degree must be >= 1, got {k}")
    perms = list(permutations(range(k)))
    index = {p: i for i, p in enumerate(perms)}
    table = [[index[tuple(p[q[x]] for x in range(k))] for q in perms] for p in perms]
    return FiniteBinarySystem(table, ["".join(map(str, p)) for p in perms])


def s3() -> FiniteBinarySystem:
    return symmetric(3)


def dihedral(n: int) -> FiniteBinarySystem:
    """Symmetries of the n-gon, order 2n; r^k s^m has index k + n*m."""
    if n < 1:
        raise InputError(f"dihedral parameter must be >= 1, got {n}")
    table = np.empty((2 * n, 2 * n), dtype=np.int64)
    for k1 in range(n):
        for m1 in range(2):
            for k2 in range(n):
                for m2 in range(2):
                    # r^k1 s^m1 r^k2 s^m2 = r^(k1 + (-1)^m1 k2) s^(m1+m2)
                    k = (k1 + (k2 if m1 == 0 else -k2)) % n
                    table[k1 + n * m1, k2 + n * m2] = k + n * ((m1 + m2) % 2)
    names = [("r%d" % k) + ("s" if m else "") for m in range(2) for k in range(n)]
    return FiniteBinarySystem(table, names)


_QUAT = {  # unit products i*j etc. as (sign, index), indices 0=1, 1=i, 2=j, 3=k
    (1, 1): (-1, 0), (2, 2): (-1, 0), (3, 3): (-1, 0),
    (1, 2): (1, 3), (2, 3): (1, 1), (3, 1): (1, 2),
    (2, 1): (-1, 3), (3, 2): (-1, 1), (1, 3): (-1, 2),
}


def q8() -> FiniteBinarySystem:
    """Quaternion group from Hamilton's rules ij=k, jk=i, ki=j (same indexing as cd_basis(2))."""
    n = 8
    table = np.empty((n, n), dtype=np.int64)
    for x in range(n):
        for y in range(n):
            i, si = divmod(x, 2)
            j, sj = divmod(y, 2)
            if i == 0 or j == 0:
                s, k = 1, i + j
            else:
                s, k = _QUAT[(i, j)]
            neg = (si + sj + (s < 0)) % 2
            table[x, y] = 2 * k + neg
    return FiniteBinarySystem(table, _signed_names(4))


@lru_cache(maxsize=None)
def cd_sign(k: int, p: int, q: int) -> int:
    """Sign s with e_p e_q = s e_{p^q} in the 2^k-dimensional Cayley-Dickson algebra.

    Doubling rule (a,b)(c,d) = (ac - conj(d) b, d a + b conj(c)), with
    e_p = (e_p, 0) for p < h and e_p = (0, e_{p-h}) for p >= h, h = 2^(k-1).
    """
    if k == 0:
        return 1
    h = 1 << (k - 1)
    conj = lambda r: 1 if r == 0 else -1  # noqa: E731
    if p < h and q < h:
        return cd_sign(k - 1, p, q)
    if p < h:
        return cd_sign(k - 1, q - h, p)
    if q < h:
        return cd_sign(k - 1, p - h, q) * conj(q)
    return -conj(q - h) * cd_sign(k - 1, q - h, p - h)


def _signed_names(dim: int) -> list[str]:
    return [f"{'+-'[s]}e{i}" for i in range(dim) for s in range(2)]


def cd_basis(k: int) -> FiniteBinarySystem:
    """Signed basis of the k-th Cayley-Dickson algebra, order 2^(k+1)."""
    if not 0 <= k <= 8:
        raise InputError(f"cd_basis level must be in 0..8, got {k}")
    dim = 1 << k
    n = 2 * dim
    table = np.empty((n, n), dtype=np.int64)
    for x in range(n):
        p, sp = divmod(x, 2)
        for y in range(n):
            q, sq = divmod(y, 2)
            neg = (sp + sq + (cd_sign(k, p, q) < 0)) % 2
            table[x, y] = 2 * (p ^ q) + neg
    return FiniteBinarySystem(table, _signed_names(dim))


def m16() -> FiniteBinarySystem:
    """Signed octonion basis, the order-16 metagroup."""
    return cd_basis(3)


def octonion_index(i: int, negative: bool = False) -> int:
    return 2 * i + int(negative)


CATALOG = {
    "cyclic": (cyclic, 1),
    "klein": (klein, 0),
    "s3": (s3, 0),
    "symmetric": (symmetric, 1),
    "q8": (q8, 0),
    "dihedral": (dihedral, 1),
    "cd_basis": (cd_basis, 1),
    "m16": (m16, 0),
}


def catalog(name: str, *params: int) -> FiniteBinarySystem:
    """Build a catalog structure by name, e.g. ``catalog("cyclic", 4)``."""
    try:
        fn, arity = CATALOG[name]
    except KeyError:
        raise InputError(f"unknown catalog name {name!r}; known: {sorted(CATALOG)}") from None
    if len(params) != arity:
        raise InputError(f"{name} takes {arity} integer parameter(s), got {len(params)}")
    return fn(*(int(p) for p in params))


def catalog_groups() -> dict[str, FiniteBinarySystem]:
    """Small associative members of the catalog, keyed by display name."""
    return {
        "cyclic(1)": cyclic(1), "cyclic(2)": cyclic(2), "cyclic(4)": cyclic(4),
        "cyclic(5)": cyclic(5), "klein": klein(), "s3": s3(), "q8": q8(),
        "dihedral(4)": dihedral(4), "cd_basis(1)": cd_basis(1), "cd_basis(2)": cd_basis(2),
    }


def cayley_dickson_factors(k: int):
    """Factor data presenting cd_basis(k) as cyclic(2) * cd_basis(k-1).

    phi is trivial and xi is the sign picked up by the doubling rule, so the
    product index ``8 * bit + x`` lines up with the index in ``cd_basis(k)``.
    """
    from .products import SmashingFactors

    if not 1 <= k <= 8:
        raise InputError(f"cayley_dickson_factors level must be in 1..8, got {k}")
    A, B = cyclic(2), cd_basis(k - 1)
    n = B.order
    conj = lambda x: x if x < 2 else x ^ 1  # noqa: E731
    xi = np.zeros((2, n, 2, n), dtype=np.int64)
    for x1 in range(n):
        for x2 in range(n):
            doubled = (
                (B.mul(x1, x2), B.mul(x2, x1)),
                (B.mul(x1, conj(x2)), B.mul(conj(x2), x1) ^ 1),
            )
            for k1 in range(2):
                for k2 in range(2):
                    xi[k1, x1, k2, x2] = B.div_l(B.mul(x1, x2), doubled[k1][k2])
    return SmashingFactors(A, B, xi=xi)
