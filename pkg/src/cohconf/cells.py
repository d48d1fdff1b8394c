"""Support-level (0/1) multiplication of configuration classes and the
search for intermediate subgroups.

A subset of classes is encoded as an int bitset: bit ``i`` set means class
``i`` is involved.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .architecture import CoherentConfiguration
from .groups import PermutationAction, StabilizerData, group_order

MAX_FREE_CLASSES = 25


class SearchTooLarge(ValueError):
    pass


def bits(X: int) -> list[int]:
    out, i = [], 0
    while X:
        if X & 1:
            out.append(i)
        X >>= 1
        i += 1
    return out


def bitset(indices) -> int:
    X = 0
    for i in indices:
        X |= 1 << i
    return X


def support_table(cc: CoherentConfiguration) -> list[list[int]]:
    """``table[i][j]`` = bitset of classes ``k`` with ``a[i, j, k] > 0``."""
    a = cc.intersection
    d1 = len(cc)
    return [[bitset(k for k in range(d1) if a[i, j, k] > 0) for j in range(d1)] for i in range(d1)]


def complex_product(cc_or_table, X: int, Y: int) -> int:
    table = cc_or_table if isinstance(cc_or_table, list) else support_table(cc_or_table)
    out = 0
    for i in bits(X):
        row = table[i]
        for j in bits(Y):
            out |= row[j]
    return out


def union(X: int, Y: int) -> int:
    return X | Y


def transpose_set(cc: CoherentConfiguration, X: int) -> int:
    return bitset(cc.transpose_perm[i] for i in bits(X))


def implication_graph(cc: CoherentConfiguration, table: list[list[int]] | None = None) -> list[int]:
    """``arcs[i]`` = bitset of classes any idempotent containing ``i`` must contain.

    Seeds with the support of ``{i} * {i}`` and the transpose of ``i``, then
    saturates: once ``i -> k`` is known, the supports of ``{i} * {k}`` and
    ``{k} * {i}`` are forced as well.
    """
    table = table or support_table(cc)
    d1 = len(cc)
    arcs = [table[i][i] | (1 << cc.transpose_perm[i]) for i in range(d1)]
    changed = True
    while changed:
        changed = False
        for i in range(d1):
            new = arcs[i]
            for k in bits(arcs[i]):
                new |= table[i][k] | table[k][i]
            if new != arcs[i]:
                arcs[i] = new
                changed = True
    return arcs


def forced_closure(arcs: Sequence[int], X: int) -> int:
    """Smallest superset of ``X`` closed under the implication arcs."""
    while True:
        Y = X
        for i in bits(X):
            Y |= arcs[i]
        if Y == X:
            return X
        X = Y


def _sort_key(X: int):
    return (bin(X).count("1"), X)


def idempotents(cc: CoherentConfiguration, force: bool = False) -> list[int]:
    """All nonzero ``X`` with ``X * X == X``, sorted by size then bitset value."""
    table = support_table(cc)
    arcs = implication_graph(cc, table)
    d1 = len(cc)
    free = d1 - 1
    if free > MAX_FREE_CLASSES and not force:
        raise SearchTooLarge(f"{d1} classes: exhaustive search refused without force")
    found = []
    for mask in range(1 << free):
        X = 1 | (mask << 1)
        # the implication closure must not escape X
        if forced_closure(arcs, X) != X:
            continue
        if complex_product(table, X, X) == X:
            found.append(X)
    return sorted(found, key=_sort_key)


def idempotents_brute_force(cc: CoherentConfiguration) -> list[int]:
    """Every nonzero subset, no pruning; the oracle for :func:`idempotents`."""
    table = support_table(cc)
    found = [X for X in range(1, 1 << len(cc)) if complex_product(table, X, X) == X]
    return sorted(found, key=_sort_key)


@dataclass(frozen=True)
class SubgroupDescriptor:
    classes: int
    index_in_G: Fraction
    coset_sizes: tuple[int, ...]
    order: int | None = None
    generators: tuple | None = None

    @property
    def class_list(self) -> list[int]:
        return bits(self.classes)


@dataclass(frozen=True)
class SubgroupPoset:
    subgroups: tuple[SubgroupDescriptor, ...]
    hasse: tuple[tuple[int, int], ...]  # (lower, upper) positions in ``subgroups``


def subgroup_poset(cc: CoherentConfiguration, idems: Sequence[int],
                   stab: StabilizerData | None = None) -> SubgroupPoset:
    """Inclusion order of the idempotents with cover relations.

    With stabilizer data each subgroup also gets its order
    ``|B| * sum(valencies)`` and generators: the generators of ``B`` plus one
    coset representative for each class involved.
    """
    sizes = cc.valencies()
    total = sum(sizes)
    b_order = None
    if stab is not None:
        b_order = group_order(stab.stabilizer_action())
        spheres = cc.label_matrix()[stab.base_point]
    descs = []
    for X in idems:
        cls = bits(X)
        s = [sizes[i] for i in cls]
        order = gens = None
        if stab is not None:
            order = b_order * sum(s)
            reps = []
            for i in cls:
                if i == 0:
                    continue
                y = next(v for v in range(cc.size) if spheres[v] == i)
                reps.append(stab.coset_rep(y))
            gens = tuple(stab.stabilizer_generators) + tuple(reps)
        descs.append(SubgroupDescriptor(X, Fraction(total, sum(s)), tuple(s), order, gens))
    hasse = []
    for a, X in enumerate(idems):
        for b, Y in enumerate(idems):
            if X == Y or X & ~Y:
                continue
            if any(Z not in (X, Y) and not (X & ~Z) and not (Z & ~Y) for Z in idems):
                continue
            hasse.append((a, b))
    return SubgroupPoset(tuple(descs), tuple(sorted(hasse)))


def generated_order(action: PermutationAction, desc: SubgroupDescriptor) -> int:
    """Order of the subgroup generated by ``desc.generators``, computed from scratch."""
    gens = list(desc.generators or ())
    if not gens:
        return 1
    return group_order(PermutationAction(action.degree, gens))
