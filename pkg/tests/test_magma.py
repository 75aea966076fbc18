import numpy as np
import pytest
from hypothesis import given, settings

from metaloop.catalog import catalog_groups, cd_basis, cyclic, m16, q8, s3
from metaloop.errors import InputError, StructureError
from metaloop.magma import (
    LEVELS, FiniteBinarySystem, associativity_witness, classify, latin_violation, satisfies, set_div_l,
    set_div_r, set_mul,
)

from conftest import loops, quasigroups


def test_identity_moved_to_zero():
    # Z3 written with identity at index 2: a*b = a+b+1 (mod 3), identity 2
    t = [[(a + b + 1) % 3 for b in range(3)] for a in range(3)]
    T = FiniteBinarySystem(t, ["x", "y", "e"])
    assert T.identity == 0
    assert T.names[0] == "e"
    assert T.relabel == (2, 1, 0)
    assert classify(T) == "group"


def test_normalize_off_keeps_indices():
    t = [[(a + b + 1) % 3 for b in range(3)] for a in range(3)]
    T = FiniteBinarySystem(t, normalize=False)
    assert T.identity == 2
    assert T.table.tolist() == t


def test_out_of_range_cell_is_named():
    with pytest.raises(InputError, match=r"table\[1\]\[0\] = 7"):
        FiniteBinarySystem([[0, 1], [7, 0]])


@pytest.mark.parametrize("bad", [[], [[0, 1]], [[0, 1], [1]], "ab"])
def test_shape_errors(bad):
    with pytest.raises(InputError):
        FiniteBinarySystem(bad)


def test_divisions_on_s3():
    G = s3()
    for a in range(6):
        for b in range(6):
            assert G.mul(a, G.div_l(a, b)) == b
            assert G.mul(G.div_r(b, a), a) == b


def test_non_quasigroup_division_raises():
    T = FiniteBinarySystem([[0, 0], [0, 1]], normalize=False)
    assert classify(T) == "magma"
    assert latin_violation(T) == ("row", 0)
    with pytest.raises(StructureError):
        T.div_l(0, 1)


def test_quasigroup_without_identity():
    # a*b = -a-b mod 3 is Latin with no identity
    T = FiniteBinarySystem([[(-a - b) % 3 for b in range(3)] for a in range(3)])
    assert T.identity is None
    assert classify(T) == "quasigroup"
    with pytest.raises(StructureError):
        T.inv_l(1)


def test_cd_levels():
    assert classify(cd_basis(0)) == "group"
    assert classify(cd_basis(1)) == "group"
    assert cd_basis(2) == q8()
    assert classify(m16()) == "central-metagroup"
    assert satisfies(m16(), "metagroup") and not satisfies(m16(), "group")
    assert classify(cd_basis(4)) == "central-metagroup"


def test_m16_nonassociative_triple_count():
    # imaginary units e_i, e_j, e_k anti-associate exactly when i, j, k are
    # distinct, nonzero and k != i^j: 7*6*4 index triples, times 8 sign choices
    T = m16()
    t = T.table
    bad = sum(int((t[t[a]] != t[a][t]).sum()) for a in range(16))
    assert bad == 7 * 6 * 4 * 8
    assert associativity_witness(T) == (2, 4, 8)


def test_m16_is_alternative_and_units_anticommute():
    T = m16()
    for x in range(16):
        for y in range(16):
            assert T.mul(T.mul(x, x), y) == T.mul(x, T.mul(x, y))
            assert T.mul(T.mul(y, x), x) == T.mul(y, T.mul(x, x))
    for i in range(1, 8):
        assert T.mul(2 * i, 2 * i) == 1           # e_i^2 = -e_0
        for j in range(1, 8):
            if i != j:
                assert T.mul(2 * i, 2 * j) == T.mul(2 * j, 2 * i) ^ 1


def test_set_operations():
    G = cyclic(4)
    assert set_mul(G, [1], [0, 2]) == {1, 3}
    assert set_div_r(G, [1], [1, 2]) == {0, 3}
    assert set_div_l(G, [1], [1, 2]) == {0, 1}
    assert set_mul(G, [], [1]) == frozenset()


@pytest.mark.parametrize("name", sorted(catalog_groups()))
def test_catalog_groups_classify_as_groups(name):
    assert classify(catalog_groups()[name]) == "group"


def test_s3_is_group_but_not_central_metagroup():
    assert classify(s3()) == "group"
    assert satisfies(s3(), "metagroup") and not satisfies(s3(), "central-metagroup")


def test_unknown_level():
    with pytest.raises(InputError):
        satisfies(cyclic(2), "ring")


@settings(max_examples=60, deadline=None)
@given(loops())
def test_random_loops_are_loops(T):
    assert T.is_loop and T.identity == 0
    assert classify(T) in LEVELS[2:]
    for a in range(T.order):
        assert T.mul(T.inv_r(a), a) == 0 and T.mul(a, T.inv_l(a)) == 0


@settings(max_examples=60, deadline=None)
@given(quasigroups())
def test_division_laws(T):
    n = T.order
    a = np.arange(n)[:, None]
    b = np.arange(n)[None, :]
    assert (T.table[a, T.ldiv_table[a, b]] == b).all()            # a(a\b) = b
    assert (T.ldiv_table[a, T.table[a, b]] == b).all()            # a\(ab) = b
    assert (T.table[T.rdiv_table[b, a], a] == b).all()            # (b/a)a = b
    assert (T.rdiv_table[T.table[b, a], a] == b).all()            # (ba)/a = b


@settings(max_examples=40, deadline=None)
@given(loops())
def test_classify_consistent_with_satisfies(T):
    tag = classify(T)
    assert satisfies(T, tag)
    if tag == "group":
        assert satisfies(T, "metagroup")   # trivial associator; t2 need not be central
    if tag == "loop":
        assert not satisfies(T, "metagroup")
