from collections import Counter

import numpy as np
import pytest

from _instances import ALL, instance, petersen_paper_order
from cohconf.algebra import algebra_closure
from cohconf.architecture import (
    ArchitectureError,
    affine_multiplicities,
    affine_spectrum_certificate,
    canonical_affine_architecture,
    canonical_clique_architecture,
    check_axioms,
    distance_regular_architecture,
    intersection_counts_match,
    intersection_tensor,
    sphere_labels,
    symmetric_iff_commutative,
    verify_architecture,
)
from cohconf.graph import (
    adjacency_operator,
    adjacency_operators,
    complete_graph,
    graph_product,
    no_architecture_graph,
    path_graph,
    petersen_graph,
)
from cohconf.linalg import RationalMatrix

AFF = ["I", "T1", "T2", "T1T2", "T2T1", "T1T2T1", "T2T1T2 - T1T2T1"]


def failure_names(exc: ArchitectureError) -> list[str]:
    return [name for name, _ in exc.failures]


# canonical constructions

@pytest.mark.parametrize("name,q,sizes", [
    ("ag", 2, [1, 1, 2, 2, 2, 2, 2]),
    ("ag", 3, [1, 2, 3, 6, 6, 12, 6]),
    ("clique", 2, [1, 1, 2, 2, 2, 2, 2]),
    ("pg", 2, [1, 2, 2, 4, 4, 8]),
    ("pg", 3, [1, 3, 3, 9, 9, 27]),
])
def test_canonical_class_sizes(name, q, sizes):
    cc = instance(name, q).canonical
    assert cc.valencies() == sizes
    assert sum(sizes) == cc.size


def test_canonical_expressions():
    for q in (2, 3, 4, 5):
        assert instance("ag", q).canonical.expression_texts() == AFF
    for q in (2, 3, 4):
        assert instance("clique", q).canonical.expression_texts() == AFF
    assert instance("pg", 3).canonical.expression_texts() == ["I", "T1", "T2", "T1T2", "T2T1", "T1T2T1"]


@pytest.mark.parametrize("name,q", [("ag", 2), ("ag", 3), ("pg", 2), ("pg", 3), ("clique", 2), ("clique", 3), ("clique", 4)])
def test_canonical_agrees_with_action(name, q):
    inst = instance(name, q)
    assert inst.canonical.class_sets() == inst.from_action.class_sets()


def test_canonical_rejects_wrong_geometry():
    pg = instance("pg", 2)
    with pytest.raises(ArchitectureError) as info:
        canonical_affine_architecture(pg.ls, pg.g, pg.flag_index)
    assert failure_names(info.value) == ["affine_plane"]
    ag = instance("ag", 3)
    with pytest.raises(ArchitectureError):
        canonical_clique_architecture(2, ag.g, ag.flag_index)


# verification failures

def test_no_architecture_candidates():
    g = no_architecture_graph()
    ab = algebra_closure(adjacency_operators(g), dim_cap=9)
    T1, T2 = adjacency_operators(g)
    with pytest.raises(ArchitectureError) as info:
        verify_architecture(g, ab, [RationalMatrix.identity(3), T1, T2])
    assert ("count ≠ dim", "count 3 ≠ dim 5") in info.value.failures


def test_named_failures():
    inst = instance("ag", 2)
    good = list(inst.canonical.classes)
    with pytest.raises(ArchitectureError) as info:
        verify_architecture(inst.g, inst.ab, good[1:])
    assert "identity" in failure_names(info.value)
    merged = good[:5] + [good[5] + good[6]]
    with pytest.raises(ArchitectureError) as info:
        verify_architecture(inst.g, inst.ab, merged)
    assert "count ≠ dim" in failure_names(info.value)
    with pytest.raises(ArchitectureError) as info:
        verify_architecture(inst.g, inst.ab, good[:-1] + [good[-1] * 2])
    assert "entries_01" in failure_names(info.value)
    with pytest.raises(ArchitectureError) as info:
        verify_architecture(inst.g, inst.ab, good + [good[1]])
    assert {"disjoint", "independent", "count ≠ dim"} <= set(failure_names(info.value))
    # a 0/1 split of a class that leaves the algebra
    half = good[6].numerator.copy()
    rows, cols = np.nonzero(half)
    other = np.zeros_like(half)
    other[rows[0], cols[0]] = 1
    half[rows[0], cols[0]] = 0
    with pytest.raises(ArchitectureError) as info:
        verify_architecture(inst.g, inst.ab, good[:6] + [RationalMatrix(half), RationalMatrix(other)])
    assert "in_span" in failure_names(info.value)
    with pytest.raises(ArchitectureError, match="shape"):
        verify_architecture(inst.g, inst.ab, [RationalMatrix.identity(3)])


def test_identity_is_moved_to_front():
    inst = instance("pg", 2)
    classes = list(inst.canonical.classes)
    cc = verify_architecture(inst.g, inst.ab, classes[1:] + classes[:1])
    assert cc.classes[0] == RationalMatrix.identity(21)


# distance-regular graphs

def common_neighbours(g):
    n = g.vertex_count
    nb = [set(g.neighbours(v)) for v in range(n)]
    return np.array([[len(nb[x] & nb[z]) for z in range(n)] for x in range(n)])


def test_petersen_scheme():
    cc = distance_regular_architecture(petersen_graph())
    assert len(cc) == 3
    assert list(cc.intersection[1, 1]) == [3, 0, 1]
    A0, A1, A2 = cc.classes
    want = (A0 * 3 + A2).numerator
    assert np.array_equal(common_neighbours(petersen_graph()), want)


def test_complete_and_path_graphs():
    for n in range(2, 7):
        cc = distance_regular_architecture(complete_graph(n))
        assert len(cc) == 2 and cc.classes[1] == adjacency_operator(complete_graph(n), 1)
    ab = algebra_closure([adjacency_operator(path_graph(4), 1)])
    assert len(ab) == 4
    with pytest.raises(ArchitectureError):
        distance_regular_architecture(path_graph(4))
    with pytest.raises(ArchitectureError, match="colour"):
        distance_regular_architecture(no_architecture_graph())


def test_rook_graph_scheme():
    g = graph_product(complete_graph(3), complete_graph(3)).monochrome()
    cc = distance_regular_architecture(g)
    assert len(cc) == 3 and cc.valencies() == [1, 4, 4]
    assert not check_axioms(cc)


# intersection numbers and axioms

@pytest.mark.parametrize("name,q", ALL)
def test_axioms_and_tensor(name, q):
    inst = instance(name, q)
    cc = inst.canonical or inst.from_action
    assert check_axioms(cc) == []
    a = intersection_tensor(cc)
    d1 = len(cc)
    assert np.array_equal(a[0], np.eye(d1, dtype=np.int64))
    assert (a >= 0).all()
    v = np.array(cc.valencies())
    # sum_k a_ijk v_k = v_i v_j
    assert np.array_equal(a @ v, np.outer(v, v))
    assert symmetric_iff_commutative(cc, inst.ab)
    tp = cc.transpose_perm
    assert tp[0] == 0 and all(tp[tp[i]] == i for i in range(d1))


def test_sampled_intersection_counts_on_large_instance():
    cc = instance("ag", 5).canonical
    assert cc.size > 60
    assert intersection_counts_match(cc, seed=1, samples=20)


def test_corrupted_tensor_is_caught():
    cc = instance("ag", 2).canonical
    bad = cc.reordered(range(7))
    bad.intersection[3, 4, 0] += 1
    assert not intersection_counts_match(bad)
    assert "product_3_4" in check_axioms(bad)


def test_petersen_product_of_classes_eight_and_nine():
    inst = instance("petersen")
    cc = inst.from_action.reordered(petersen_paper_order(inst.from_action))
    coeffs = {k: int(c) for k, c in enumerate(cc.intersection[8, 9]) if c}
    assert coeffs == {1: 4, 3: 2, 7: 1, 10: 1}
    v = cc.valencies()
    # row sums pin down the T_w10 term: 4*4 = 4*1 + 2*2 + 1*4 + 1*4
    assert v[8] * v[9] == sum(c * v[k] for k, c in coeffs.items()) == 16


def test_reordering():
    cc = instance("ag", 2).canonical
    perm = [0, 2, 1, 4, 3, 5, 6]
    r = cc.reordered(perm)
    assert r.classes[1] == cc.classes[2]
    assert cc.transpose_perm == r.transpose_perm == (0, 1, 2, 4, 3, 5, 6)
    assert check_axioms(r) == []
    with pytest.raises(ValueError):
        cc.reordered([1, 0, 2, 3, 4, 5, 6])


# spheres

def test_sphere_labels():
    inst = instance("petersen")
    cc = inst.from_action.reordered(petersen_paper_order(inst.from_action))
    lab = sphere_labels(cc, 0)
    assert lab.labels[0] == 0
    assert lab.sphere_sizes(11) == [1, 1, 2, 2, 2, 2, 4, 4, 4, 4, 4]
    back = sphere_labels(cc, 0, "to-base")
    assert back.labels == tuple(cc.transpose_perm[k] for k in lab.labels)
    assert sum(sphere_labels(instance("ag", 2).canonical, 5).sphere_sizes(7)) == 12
    with pytest.raises(ValueError):
        sphere_labels(cc, 0, "sideways")


# affine planes: modules and spectrum

@pytest.mark.parametrize("q", [2, 3, 4])
def test_affine_multiplicities(q):
    inst = instance("ag", q)
    m = affine_multiplicities(inst.g, inst.ab, q)
    assert m.as_tuple() == (q * q - 1, (q - 1) ** 2 * (q + 1), q, 1)
    assert 2 * m.n0 + m.n1 + m.n2 + m.n3 == q * q * (q + 1)


def test_multiplicities_reject_other_geometries():
    inst = instance("pg", 2)
    with pytest.raises(ArchitectureError, match="multiplicities"):
        affine_multiplicities(inst.g, inst.ab, 2)


def _float_spectrum(g):
    t = (adjacency_operator(g, 1) + adjacency_operator(g, 2)).numerator.astype(float)
    ev = np.linalg.eigvalsh(t)
    return Counter(np.round(ev, 6) + 0.0)


def test_spectrum_against_floating_point():
    report = affine_spectrum_certificate(instance("ag", 2).g, 2)
    assert report.passed and len(report.checks) == 5
    assert _float_spectrum(instance("ag", 2).g) == Counter({-2.0: 3, 0.0: 2, 3.0: 1, 2.0: 3, -1.0: 3})
    spec3 = _float_spectrum(instance("ag", 3).g)
    assert spec3[-2.0] == 16
    r = np.sqrt(13.0)
    assert spec3[round((3 + r) / 2, 6)] == spec3[round((3 - r) / 2, 6)] == 8
    assert sum(k * v for k, v in spec3.items()) == pytest.approx(0, abs=1e-6)


def test_spectrum_report_names_failures():
    report = affine_spectrum_certificate(instance("ag", 3).g, 2)
    assert not report.passed
    assert "annihilator" in report.failing()
