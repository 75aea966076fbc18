import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from metaloop.catalog import catalog_groups, cyclic, klein, m16, s3
from metaloop.errors import InputError, PreconditionError
from metaloop.topology import (
    BaseFamily, FiniteTopology, base_from_topology, check_continuity, discrete, discrete_base,
    enumerate_topologies, generated_topology, indiscrete, members, random_topology, to_mask,
    topology_from_base, verify_base_axioms, verify_function_space_identities, w_set,
)
from metaloop.wreath import FunctionSpace

from conftest import loops, quasigroups


def test_mask_helpers():
    assert to_mask([0, 2]) == 5
    assert members(5) == [0, 2]
    assert members(0) == []


def test_topology_validation():
    with pytest.raises(InputError, match="empty"):
        FiniteTopology(2, [[0, 1]])
    with pytest.raises(InputError, match="whole"):
        FiniteTopology(2, [[]])
    with pytest.raises(InputError, match="union"):
        FiniteTopology(3, [[], [0], [1], [0, 1, 2]])
    with pytest.raises(InputError, match="intersection"):
        FiniteTopology(3, [[], [0, 1], [1, 2], [0, 1, 2]])
    with pytest.raises(InputError):
        FiniteTopology(2, [[], [0, 5], [0, 1]])


def test_topology_counts():
    # numbers of topologies on 0..4 labelled points
    assert [len(enumerate_topologies(n)) for n in range(5)] == [1, 1, 4, 29, 355]


def test_discrete_and_indiscrete_bases():
    B = base_from_topology(3, discrete(3))
    assert all(1 << g in B[g] for g in range(3))
    assert base_from_topology(3, indiscrete(3)).at == ((7,), (7,), (7,))


def test_base_of_a_four_point_topology():
    T = FiniteTopology(4, [[], [0], [0, 1], [2, 3], [0, 2, 3], [0, 1, 2, 3]])
    B = base_from_topology(cyclic(4), T)
    assert B.as_lists() == [
        [[0], [0, 1], [0, 2, 3], [0, 1, 2, 3]],
        [[0, 1], [0, 1, 2, 3]],
        [[2, 3], [0, 2, 3], [0, 1, 2, 3]],
        [[2, 3], [0, 2, 3], [0, 1, 2, 3]],
    ]


@pytest.mark.parametrize("name", sorted(catalog_groups()))
def test_discrete_base_passes_everywhere(name):
    G = catalog_groups()[name]
    rep = verify_base_axioms(G, discrete_base(G.order))
    assert rep.ok, rep.lines()


def test_discrete_base_on_m16_and_quasigroup():
    assert verify_base_axioms(m16(), discrete_base(16)).ok
    Q = np.array([[(-a - b) % 3 for b in range(3)] for a in range(3)])
    from metaloop.magma import FiniteBinarySystem
    assert verify_base_axioms(FiniteBinarySystem(Q), discrete_base(3)).ok


def test_indiscrete_base_fails_only_t1():
    rep = verify_base_axioms(s3(), base_from_topology(6, indiscrete(6)))
    assert set(rep.failures()) == {"base_8_t1"}
    assert rep["base_8_t1"].witness == (0, [0, 1, 2, 3, 4, 5])


def test_broken_base_fails_translation():
    fams = [[1 << g] for g in range(4)]
    fams[3] = [to_mask([3, 0])]
    rep = verify_base_axioms(cyclic(4), BaseFamily(4, fams))
    assert not rep["base_1_translation"]
    assert rep["base_1_translation"].witness == ("left", 0, 3)


def test_coset_topology_is_a_quasigroup_topology_but_not_t1():
    T = FiniteTopology(4, [[], [0, 2], [1, 3], [0, 1, 2, 3]])
    G = cyclic(4)
    assert check_continuity(G, T).ok
    rep = verify_base_axioms(G, base_from_topology(G, T))
    assert set(rep.failures()) == {"base_8_t1"}


def test_continuity_discrete_indiscrete():
    for G in (cyclic(3), s3(), m16()):
        assert check_continuity(G, discrete(G.order)).ok
        rep = check_continuity(G, indiscrete(G.order))
        assert rep.ok
        assert rep.info["T1"] is (G.order == 1)


def test_sierpinski_topology_on_z2_breaks_continuity():
    rep = check_continuity(cyclic(2), FiniteTopology(2, [[], [0], [0, 1]]))
    assert not rep["mul_continuous"]
    # the preimage of {0} under mul is {(0,0), (1,1)}; (1,1) has no product neighbourhood inside it
    assert rep["mul_continuous"].witness == {"open": [0], "pair": (1, 1)}
    assert "discrete" in rep.info["note"]


def test_topology_from_base_rejects_bad_base():
    with pytest.raises(PreconditionError):
        topology_from_base(BaseFamily(3, [[[0, 1]], [[1, 2]], [[2]]]))
    with pytest.raises(PreconditionError):
        topology_from_base(BaseFamily(2, [[[0]], []]))


def test_one_point_carrier():
    assert topology_from_base(BaseFamily(1, [[[0]]])).opens == (0, 1)


def test_discrete_base_generates_discrete_topology():
    assert len(topology_from_base(discrete_base(4))) == 16


def test_round_trip_on_corpus():
    rng = np.random.default_rng(3)
    corpus = [T for n in range(1, 5) for T in enumerate_topologies(n)]
    corpus += [random_topology(5, rng) for _ in range(30)]
    assert len(corpus) >= 20
    for T in corpus:
        assert topology_from_base(base_from_topology(T.n, T)) == T


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 6), st.lists(st.integers(0, 63), max_size=4))
def test_generated_topology_is_closed(n, subbase):
    full = (1 << n) - 1
    T = generated_topology(n, [s & full for s in subbase])
    s = set(T.opens)
    assert all((U | V) in s and (U & V) in s for U in s for V in s)
    assert topology_from_base(base_from_topology(n, T)) == T


@settings(max_examples=30, deadline=None)
@given(quasigroups(1, 5))
def test_discrete_passes_on_random_quasigroups(G):
    assert verify_base_axioms(G, discrete_base(G.order)).ok
    assert check_continuity(G, discrete(G.order)).ok


# W(S, Q) ---------------------------------------------------------------------

def test_w_set_examples():
    Z2 = cyclic(2)
    assert w_set(2, Z2, [0, 1], [0, 1]) == frozenset(range(4))
    assert w_set(2, Z2, [0], [0]) == {0, 1}
    assert w_set(2, Z2, [0, 1], [0]) == {0}
    with pytest.raises(InputError):
        w_set(2, Z2, [], [0])
    with pytest.raises(InputError):
        w_set(2, Z2, [5], [0])


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 3), st.integers(2, 4), st.data())
def test_w_set_size_formula(m, nb, data):
    S = data.draw(st.sets(st.integers(0, m - 1), min_size=1))
    Q = data.draw(st.sets(st.integers(0, nb - 1), min_size=1))
    W = w_set(m, cyclic(nb), S, Q)
    assert len(W) == len(Q) ** len(S) * nb ** (m - len(S))


def test_w_set_matches_wreath_function_space():
    B = cyclic(3)
    V = [4, 9]
    F = FunctionSpace(V, B)
    W = w_set(V, B, [9], [1, 2])
    assert W == {f for f in range(len(F)) if F.value(f, 9) in (1, 2)}


@pytest.mark.parametrize("m,nb", [(1, 2), (1, 3), (2, 2), (2, 3), (2, 4), (3, 2)])
def test_function_space_identities(m, nb):
    rep = verify_function_space_identities(m, cyclic(nb))
    assert rep.ok, rep.lines()


def test_function_space_identities_nonassociative():
    from test_structure import L5
    rep = verify_function_space_identities(2, L5)
    assert rep.ok, rep.lines()


def test_pointwise_containments_are_equalities_on_searched_range():
    # searched |V| <= 2 with B = Z4 and S3-free cases: no strict containment exists
    rep = verify_function_space_identities(2, cyclic(4))
    assert rep.info["strict containments"].startswith("0 of ")


def _naive_continuous(tab, T):
    """Preimage of each open set must be a union of products of open sets."""
    n = T.n
    opens = [set(members(U)) for U in T.opens]
    boxes = [{(a, b) for a in U for b in V} for U in opens for V in opens]
    for O in opens:
        pre = {(a, b) for a in range(n) for b in range(n) if tab[a][b] in O}
        covered = set()
        for box in boxes:
            if box <= pre:
                covered |= box
        if covered != pre:
            return False
    return True


@pytest.mark.parametrize("n", [3, 4])
def test_continuity_matches_preimage_definition(n):
    from metaloop.magma import FiniteBinarySystem
    structures = [cyclic(n), FiniteBinarySystem([[(-a - b) % n for b in range(n)] for a in range(n)])]
    if n == 4:
        structures.append(klein())
    for G in structures:
        for T in enumerate_topologies(n):
            rep = check_continuity(G, T)
            for name, tab in (("mul", G.table), ("div_l", G.ldiv_table), ("div_r", G.rdiv_table)):
                assert bool(rep[f"{name}_continuous"]) == _naive_continuous(tab.tolist(), T)
