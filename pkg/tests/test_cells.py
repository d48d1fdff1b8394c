import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from _instances import ALL, WITH_ACTION, instance, petersen_paper_order
from cohconf.architecture import distance_regular_architecture
from cohconf.cells import (
    MAX_FREE_CLASSES,
    SearchTooLarge,
    bits,
    bitset,
    complex_product,
    forced_closure,
    generated_order,
    idempotents,
    idempotents_brute_force,
    implication_graph,
    subgroup_poset,
    support_table,
    transpose_set,
)
from cohconf.graph import petersen_graph
from cohconf.groups import stabilizer


def petersen_paper():
    inst = instance("petersen")
    return inst, inst.from_action.reordered(petersen_paper_order(inst.from_action))


def test_bitsets():
    assert bits(0b10110) == [1, 2, 4]
    assert bitset([4, 1, 2]) == 0b10110
    assert bits(bitset([])) == []


def test_identity_class_is_neutral():
    _, cc = petersen_paper()
    for X in (1 << 5, bitset([2, 7, 9]), (1 << 11) - 1):
        assert complex_product(cc, 1, X) == X == complex_product(cc, X, 1)


def test_petersen_products():
    _, cc = petersen_paper()
    assert bits(complex_product(cc, 1 << 9, 1 << 9)) == [0, 5, 6, 10]
    assert bits(complex_product(cc, 1 << 9, 1 << 6)) == [3, 6, 8, 9]
    # the support of A8 A9 has four classes; the T_w10 term is forced by row sums
    assert bits(complex_product(cc, 1 << 8, 1 << 9)) == [1, 3, 7, 10]


def test_petersen_implication_arcs():
    _, cc = petersen_paper()
    arcs = implication_graph(cc)
    assert {0, 5, 6, 10, 3} <= set(bits(arcs[9]))
    assert arcs[0] == 1
    # classes 3, 4, 6, 7, 8, 9 force everything
    full = (1 << 11) - 1
    for i in (3, 4, 6, 7, 8, 9):
        assert forced_closure(arcs, 1 | (1 << i)) == full


def test_petersen_idempotents_and_poset():
    inst, cc = petersen_paper()
    idems = idempotents(cc)
    assert [bits(X) for X in idems] == [[0], [0, 1], [0, 2], [0, 5], [0, 1, 10], list(range(11))]
    poset = subgroup_poset(cc, idems, stabilizer(inst.action, 0))
    assert poset.hasse == ((0, 1), (0, 2), (0, 3), (1, 4), (2, 5), (3, 5), (4, 5))
    orders = [d.order for d in poset.subgroups]
    assert orders == [4, 8, 12, 12, 24, 120]
    for d in poset.subgroups:
        assert generated_order(inst.action, d) == d.order
        assert 120 / d.order == d.index_in_G


def test_poset_without_group():
    cc = instance("ag", 2).canonical
    idems = idempotents(cc)
    poset = subgroup_poset(cc, idems)
    assert all(d.order is None and d.generators is None for d in poset.subgroups)
    assert poset.subgroups[0].coset_sizes == (1,)


@pytest.mark.parametrize("name,q", WITH_ACTION)
def test_orders_agree_with_generated_subgroups(name, q):
    inst = instance(name, q)
    cc = inst.from_action
    poset = subgroup_poset(cc, idempotents(cc), stabilizer(inst.action, 0))
    for d in poset.subgroups:
        assert generated_order(inst.action, d) == d.order


@pytest.mark.parametrize("name,q", ALL)
def test_pruned_search_matches_brute_force(name, q):
    inst = instance(name, q)
    cc = inst.canonical or inst.from_action
    found = idempotents(cc)
    assert found == idempotents_brute_force(cc)
    full = (1 << len(cc)) - 1
    assert found[0] == 1 and found[-1] == full
    for X in found:
        assert transpose_set(cc, X) == X


def test_projective_idempotents():
    cc = instance("pg", 2).canonical
    assert [bits(X) for X in idempotents(cc)] == [[0], [0, 1], [0, 2], list(range(6))]


def test_search_refuses_large_configurations(monkeypatch):
    cc = instance("ag", 2).canonical
    assert len(cc) - 1 <= MAX_FREE_CLASSES
    monkeypatch.setattr("cohconf.cells.MAX_FREE_CLASSES", 3)
    with pytest.raises(SearchTooLarge):
        idempotents(cc)
    assert idempotents(cc, force=True) == idempotents_brute_force(cc)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(["petersen", "ag2", "clique3", "pg3", "pgraph"]), st.data())
def test_product_associative(which, data):
    if which == "pgraph":
        cc = distance_regular_architecture(petersen_graph())
    elif which == "petersen":
        cc = instance("petersen").from_action
    else:
        cc = instance(which[:-1], int(which[-1])).canonical
    table = support_table(cc)
    subsets = st.integers(1, (1 << len(cc)) - 1)
    X, Y, Z = data.draw(subsets), data.draw(subsets), data.draw(subsets)
    left = complex_product(table, complex_product(table, X, Y), Z)
    right = complex_product(table, X, complex_product(table, Y, Z))
    assert left == right
    # distributes over union
    assert complex_product(table, X | Y, Z) == complex_product(table, X, Z) | complex_product(table, Y, Z)


def test_closure_never_drops_idempotents():
    rng = random.Random(3)
    for name, q in ALL:
        inst = instance(name, q)
        cc = inst.canonical or inst.from_action
        arcs = implication_graph(cc)
        for X in idempotents_brute_force(cc):
            assert forced_closure(arcs, X) == X
        for _ in range(20):
            X = 1 | rng.getrandbits(len(cc))
            assert forced_closure(arcs, forced_closure(arcs, X)) == forced_closure(arcs, X)
