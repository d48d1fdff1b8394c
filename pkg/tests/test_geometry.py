from itertools import product

import pytest

from cohconf.geometry import (
    Flag,
    FiniteField,
    GeometryError,
    LineSpace,
    affine_plane,
    chamber_system,
    clique_pair_labels,
    clique_plane,
    clique_symmetries,
    format_linespace,
    is_prime_power,
    parse_linespace,
    petersen_linespace,
    projective_plane,
)
from cohconf.graph import is_chamber_system, regularity_orders
from cohconf.groups import group_order, is_colour_preserving


def test_prime_powers():
    assert [q for q in range(2, 30) if is_prime_power(q)] == [2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 17, 19, 23, 25, 27, 29]
    with pytest.raises(GeometryError):
        FiniteField(6)


@pytest.mark.parametrize("q", [2, 3, 4, 5, 8, 9])
def test_field_axioms(q):
    F = FiniteField(q)
    E = list(F.elements)
    for x, y in product(E, repeat=2):
        assert F.add(x, y) == F.add(y, x)
        assert F.mul(x, y) == F.mul(y, x)
        assert F.sub(F.add(x, y), y) == x
    for x in E[1:]:
        assert F.mul(x, F.inv(x)) == 1
    for x, y, z in product(E, repeat=3):
        assert F.mul(x, F.add(y, z)) == F.add(F.mul(x, y), F.mul(x, z))
    # the primitive element generates the multiplicative group
    seen, p = set(), 1
    for _ in range(q - 1):
        p = F.mul(p, F.primitive)
        seen.add(p)
    assert seen == set(E[1:])


@pytest.mark.parametrize("q", [2, 3, 4, 5])
def test_plane_counts(q):
    pg = projective_plane(q)
    assert pg.point_count == len(pg.lines) == q * q + q + 1
    assert pg.is_projective_plane() and not pg.is_affine_plane()
    ag = affine_plane(q)
    assert ag.point_count == q * q and len(ag.lines) == q * q + q
    assert ag.is_affine_plane() and not ag.is_projective_plane()


@pytest.mark.parametrize("make,n,orders", [
    (lambda: projective_plane(2), 21, (2, 2)),
    (lambda: affine_plane(3), 36, (2, 3)),
    (lambda: clique_plane(3), 20, (1, 3)),
    (petersen_linespace, 30, (1, 2)),
])
def test_chamber_systems(make, n, orders):
    g, index = chamber_system(make())
    assert g.vertex_count == n == len(index)
    assert is_chamber_system(g)
    assert regularity_orders(g) == orders
    assert g.is_connected()


def test_chamber_system_needs_colour_two():
    with pytest.raises(GeometryError):
        chamber_system(LineSpace(4, [(0, 1), (2, 3)]))


def test_linespace_validation():
    with pytest.raises(GeometryError):
        LineSpace(3, [(0,)])
    with pytest.raises(GeometryError):
        LineSpace(3, [(0, 5)])


def test_linespace_text_round_trip():
    ls = projective_plane(3)
    again = parse_linespace(format_linespace(ls))
    assert again.lines == ls.lines and again.point_count == ls.point_count
    with pytest.raises(GeometryError, match="line 2"):
        parse_linespace("linespace\npoint 3\n")


def test_clique_symmetries():
    ls, g, index, a = clique_symmetries(2)
    assert group_order(a) == 24
    assert is_colour_preserving(a, g)
    labels = clique_pair_labels(2, index)
    assert sorted(labels.values()) == [(i, j) for i in range(4) for j in range(4) if i != j]
    assert labels[index[Flag(0, ls.line_index([0, 1]))]] == (0, 1)
