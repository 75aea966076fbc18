"""Acceptance criteria, one test each; every test records a PASS/FAIL line.

The lines are printed in the terminal summary (section "acceptance criteria")
and also written to stdout with ``-s``.
"""
import time
from itertools import product

import numpy as np
import pytest

from conftest import ACCEPTANCE_LINES
from factor_corpus import CORPUS
from metaloop.catalog import CATALOG, catalog, cayley_dickson_factors, cd_basis, cyclic, m16, s3
from metaloop.cosets import (
    check_nested_transversals, check_transversal, check_translation_commutes, is_homomorphism, quotient,
    quotient_structure, right_translation, transversal,
)
from metaloop.magma import FiniteBinarySystem, associativity_witness, classify
from metaloop.products import (
    SmashingFactors, direct_product, embeddings_and_invariance, psi_tau_partition_matches,
    smashed_twisted_product,
)
from metaloop.search import _complete, brute_force_count, search_small
from metaloop.structure import associator_t, center, closure, is_central_metagroup, is_metagroup, minimal_t_subgroup
from metaloop.topology import (
    FiniteTopology, base_from_topology, check_continuity, discrete, discrete_base, enumerate_topologies, indiscrete,
    random_topology, topology_from_base, verify_base_axioms, verify_function_space_identities,
)
from metaloop.wreath import WreathSpec, f_action, theta_isomorphism, wreath_product


def record(number, title, checks, detail=""):
    """Record one line for the criterion, then fail with the names of the failed checks."""
    failed = [k for k, ok in checks.items() if not ok]
    line = f"criterion {number:2d} {title}: {'PASS' if not failed else 'FAIL'}"
    if detail:
        line += f"  ({detail})"
    if failed:
        line += f"  failed: {', '.join(failed)}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert not failed, line


# independent oracles ---------------------------------------------------------

def naive_flags(t):
    """Pure-Python scans: (associative, metagroup, central metagroup) for a loop with identity 0."""
    n = len(t)
    div_l = [[None] * n for _ in range(n)]
    for a in range(n):
        for b in range(n):
            div_l[a][t[a][b]] = b
    assoc = [[[t[t[a][b]][c] == t[a][t[b][c]] for c in range(n)] for b in range(n)] for a in range(n)]
    cen = [z for z in range(n)
           if all(t[z][x] == t[x][z] for x in range(n))
           and all(assoc[z][x][y] and assoc[x][z][y] and assoc[x][y][z] for x in range(n) for y in range(n))]
    associative = all(assoc[a][b][c] for a in range(n) for b in range(n) for c in range(n))
    # (ab)c = t (a(bc))  =>  t = ((ab)c) / (a(bc)) on the right
    div_r = [[None] * n for _ in range(n)]
    for a in range(n):
        for b in range(n):
            div_r[t[a][b]][b] = a
    meta = all(div_r[t[t[a][b]][c]][t[a][t[b][c]]] in cen
               for a in range(n) for b in range(n) for c in range(n))
    central = meta and all(div_r[t[a][b]][t[b][a]] in cen for a in range(n) for b in range(n))
    return associative, meta, central


def doubled_basis(k):
    """Signed basis of the k-fold Cayley-Dickson doubling of the reals, from nested pairs.

    Elements are coefficient vectors; (a, b)(c, d) = (ac - conj(d) b, d a + b conj(c)).
    """
    def conj(x):
        return x if len(x) == 1 else (conj(x[0]), neg(x[1]))

    def neg(x):
        return (-x[0],) if len(x) == 1 else (neg(x[0]), neg(x[1]))

    def add(x, y):
        return (x[0] + y[0],) if len(x) == 1 else (add(x[0], y[0]), add(x[1], y[1]))

    def mul(x, y):
        if len(x) == 1:
            return (x[0] * y[0],)
        a, b = x
        c, d = y
        return (add(mul(a, c), neg(mul(conj(d), b))), add(mul(d, a), mul(b, conj(c))))

    def unit(i, sign, level):
        if level == 0:
            return (sign,)
        zero = unit(0, 0, level - 1)
        half = 1 << (level - 1)
        return (unit(i, sign, level - 1), zero) if i < half else (zero, unit(i - half, sign, level - 1))

    elems = [unit(i, s, k) for i in range(1 << k) for s in (1, -1)]
    index = {e: n for n, e in enumerate(elems)}
    return [[index[mul(x, y)] for y in elems] for x in elems]


def catalog_members():
    for name, (_, arity) in sorted(CATALOG.items()):
        for params in ([()] if arity == 0 else [(p,) for p in range(1, 5)]):
            if name == "cd_basis" and params and params[0] > 3:
                continue
            yield f"{name}{params if params else ''}", catalog(name, *params)


# 1 ---------------------------------------------------------------------------

def test_criterion_01_axiom_hierarchy():
    checks = {}
    for label, T in catalog_members():
        assoc, meta, central = naive_flags(T.table.tolist())
        checks[f"{label} classify"] = classify(T) == ("group" if assoc else "central-metagroup" if central
                                                      else "metagroup" if meta else "loop")
        checks[f"{label} is_metagroup"] = bool(is_metagroup(T)) == meta
        checks[f"{label} is_central_metagroup"] = bool(is_central_metagroup(T)) == central
        if T.order <= 8:
            checks[f"{label} is group"] = assoc
    M = m16()
    oracle = doubled_basis(3)
    checks["doubling oracle reproduces the M16 table"] = np.array_equal(np.array(oracle), M.table)
    checks["doubling oracle agrees on M16 flags"] = naive_flags(oracle) == naive_flags(M.table.tolist()) == (False, True, True)
    checks["M16 metagroup, central, not group"] = (bool(is_metagroup(M)) and bool(is_central_metagroup(M))
                                                   and not M.is_associative)
    w = associativity_witness(M)
    a, b, c = w
    checks["witness is nonassociative"] = M.mul(M.mul(a, b), c) != M.mul(a, M.mul(b, c))
    record(1, "axiom hierarchy", checks, f"M16 classifies as {classify(M)}; nonassociative triple {w}")


# 2 ---------------------------------------------------------------------------

def test_criterion_02_associator_law():
    M = m16()
    Z = center(M)
    bad = None
    for a, b, c in product(range(16), repeat=3):
        t = associator_t(M, a, b, c)
        if t not in Z or M.mul(M.mul(a, b), c) != M.mul(t, M.mul(a, M.mul(b, c))):
            bad = (a, b, c)
            break
    checks = {"(ab)c = t(a(bc)) with t central, all 4096 triples": bad is None,
              "|center| = 2": len(Z) == 2,
              "|minimal t-subgroup| = 2": len(minimal_t_subgroup(M)) == 2}
    record(2, "associator law", checks, f"first failure {bad}" if bad else "4096 triples exact")


# 3 ---------------------------------------------------------------------------

def test_criterion_03_transversal_identities():
    S = s3()
    c3 = closure(S, [next(g for g in range(S.order) if S.mul(g, g) != 0)])
    cases = {"M16/center": (m16(), center(m16())), "M16/Q8": (m16(), range(8)), "S3/C3": (S, c3)}
    checks = {}
    for label, (G, H) in cases.items():
        rep = check_transversal(transversal(G, H))
        checks[label] = rep.ok
    checks["C3 has order 3"] = len(c3) == 3
    rep = check_nested_transversals(m16(), range(8), [0, 1])
    checks["nested transversals M16, Q8, {+-e0}"] = rep.ok
    record(3, "transversal identities", checks, f"{len(rep.items)} nested identities checked")


# 4 ---------------------------------------------------------------------------

def test_criterion_04_quotient():
    M = m16()
    Q = quotient(M, center(M))
    S = quotient_structure(Q)
    pi = [Q.coset_of(g) for g in range(M.order)]
    mismatch = None
    for b in range(M.order):
        R = right_translation(Q, b)
        for g in range(M.order):
            if R[pi[g]] != pi[M.mul(g, b)] or pi[M.mul(g, b)] != S.mul(pi[g], pi[b]):
                mismatch = (b, g)
                break
        if mismatch:
            break
    checks = {
        "order 8": S.order == 8,
        "group": S.is_associative and S.is_loop,
        "every element self-inverse": all(S.mul(x, x) == S.identity for x in range(S.order)),
        "abelian": bool((S.table == S.table.T).all()),
        "pi homomorphism": bool(is_homomorphism(pi, M, S)),
        "translation commutes with pi": bool(check_translation_commutes(Q)) and mismatch is None,
    }
    record(4, "quotient by the center", checks, "M16 / {+-e0} is elementary abelian of order 8")


# 5 ---------------------------------------------------------------------------

def test_criterion_05_smashed_product_fidelity():
    pool = [cyclic(2), cyclic(3), cyclic(4), s3(), catalog("klein"), catalog("q8"), catalog("dihedral", 3), cd_basis(2)]
    rng = np.random.default_rng(20240519)
    checks = {}
    for _ in range(5):
        i, j = rng.integers(len(pool), size=2)
        A, B = pool[i], pool[j]
        G = smashed_twisted_product(SmashingFactors.trivial(A, B))
        checks[f"trivial factors {A.order}x{B.order}"] = np.array_equal(G.table, direct_product(A, B).table)
    F = cayley_dickson_factors(3)
    G = smashed_twisted_product(F)
    checks["Cayley-Dickson factors give cd_basis(3)"] = np.array_equal(G.table, cd_basis(3).table)
    checks["and the independent doubling table"] = np.array_equal(G.table, np.array(doubled_basis(3)))
    checks["Cayley-Dickson factors are Z2 and Q8"] = F.A.order == 2 and F.B.order == 8
    record(5, "smashed product fidelity", checks, "5 random pairs and the doubling of Q8")


# 6 ---------------------------------------------------------------------------

def test_criterion_06_embeddings_and_invariance():
    checks = {}
    nontrivial = 0
    for name, make in CORPUS.items():
        F = make()
        G = smashed_twisted_product(F)
        rep = embeddings_and_invariance(G, F)
        checks[name] = rep.ok and bool(psi_tau_partition_matches(G, F))
        nontrivial += bool(F.xi.any() or (F.phi != np.arange(F.B.order)).any())
    checks[">= 3 systems, one nontrivial"] = len(CORPUS) >= 3 and nontrivial >= 1
    record(6, "embeddings and invariance", checks, f"{len(CORPUS)} factor systems, {nontrivial} nontrivial")


# 7 ---------------------------------------------------------------------------

def test_criterion_07_wreath():
    start = time.perf_counter()
    xi = np.zeros((1, 4, 1, 4), dtype=np.int64)
    xi[0, 1::2, 0, 1::2] = 2
    specs = {
        "Z2, A={e}, B=Z2": (WreathSpec(cyclic(2), [0], cyclic(2)), [0, 1], [0, 1]),
        "Z2, A={e}, B=Z4, xi odd-odd=2": (WreathSpec(cyclic(2), [0], cyclic(4), xi=xi, C1=[0, 2]), [0, 1], [0, 3, 2, 1]),
    }
    checks = {}
    sizes = []
    for label, (spec, i, j) in specs.items():
        W = wreath_product(spec)
        P = W.product
        sizes.append(P.order)
        const_e = W.space.encode([0] * len(W.V))
        checks[f"{label} loop with identity (e, const_e)"] = P.is_loop and P.identity == W.index(0, const_e) == 0
        checks[f"{label} f_action at e is identity"] = all(f_action(W, 0, f) == f for f in range(len(W.space)))
        checks[f"{label} theta preserves mul, div_l, div_r"] = theta_isomorphism(W, i, j).report.ok
    elapsed = time.perf_counter() - start
    checks["runtime < 5 s"] = elapsed < 5
    record(7, "wreath products", checks, f"orders {sizes}, {elapsed:.2f} s")


# 8 ---------------------------------------------------------------------------

def test_criterion_08_topological_bases():
    checks = {}
    for label, T in catalog_members():
        if T.order <= 16:
            checks[f"discrete base on {label}"] = verify_base_axioms(T, discrete_base(T.order)).ok
    anti = FiniteBinarySystem([[(-a - b) % 3 for b in range(3)] for a in range(3)], normalize=False)
    checks["discrete base on x*y = -x-y mod 3"] = verify_base_axioms(anti, discrete_base(3)).ok
    rng = np.random.default_rng(7)
    corpus = [T for n in range(1, 4) for T in enumerate_topologies(n)]
    corpus += [random_topology(n, rng) for n in (4, 5) for _ in range(10)]
    checks["round trip on the topology corpus"] = all(
        topology_from_base(base_from_topology(T.n, T)) == T for T in corpus)
    Z2 = cyclic(2)
    checks["discrete topology continuous"] = check_continuity(Z2, discrete(2)).ok
    checks["indiscrete topology continuous"] = check_continuity(Z2, indiscrete(2)).ok
    sierpinski = check_continuity(Z2, FiniteTopology(2, [[], [1], [0, 1]]))
    witness = sierpinski.items["mul_continuous"].witness
    checks["Sierpinski space on Z2 is not continuous"] = not sierpinski.ok and witness is not None
    record(8, "bases and continuity", checks,
           f"{len(corpus)} topologies round-tripped; Sierpinski witness {witness}")


# 9 ---------------------------------------------------------------------------

def test_criterion_09_function_space_identities():
    start = time.perf_counter()
    checks = {}
    for v, b in [(1, 2), (2, 2), (2, 4), (3, 2)]:
        checks[f"|V|={v}, |B|={b} ({b ** v} functions)"] = b ** v <= 64 and verify_function_space_identities(v, cyclic(b)).ok
    elapsed = time.perf_counter() - start
    checks["runtime < 10 s"] = elapsed < 10
    record(9, "function space identities", checks, f"{elapsed:.2f} s")


# 10 --------------------------------------------------------------------------

def test_criterion_10_enumeration():
    checks = {}
    counts = []
    for n in range(1, 6):
        one = search_small(n, jobs=1)
        two = search_small(n, jobs=2)
        counts.append(one.total)
        checks[f"order {n} jobs 1 == jobs 2"] = (one.total, one.matched) == (two.total, two.matched)
        checks[f"order {n} matches row-permutation recount"] = brute_force_count(n) == (one.total, one.matched)
    small = [FiniteBinarySystem(sq, normalize=False) for n in range(1, 4) for sq in _complete(n, None)]
    checks["every loop of order <= 3 is a group"] = all(naive_flags(T.table.tolist())[0] for T in small)
    record(10, "enumeration", checks, f"reduced squares {counts}")
