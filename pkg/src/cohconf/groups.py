"""Permutation actions: orbits, stabilizers, orders, Cayley graphs, and
strongly transitive actions on edge-coloured graphs."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .graph import EdgeColouredGraph


class GroupError(ValueError):
    pass


class Permutation:
    """Bijection of ``0..m-1`` given by its image array.

    ``p * r`` is composition with ``r`` applied first, so
    ``(p * r)(x) == p(r(x))``.
    """

    __slots__ = ("image", "_hash")

    def __init__(self, image: Iterable[int]):
        self.image = tuple(int(x) for x in image)
        if sorted(self.image) != list(range(len(self.image))):
            raise GroupError("not a permutation")
        self._hash = hash(self.image)

    @classmethod
    def identity(cls, degree: int) -> "Permutation":
        return cls(range(degree))

    @classmethod
    def from_cycles(cls, degree: int, cycles: Sequence[Sequence[int]]) -> "Permutation":
        img = list(range(degree))
        for cyc in cycles:
            for a, b in zip(cyc, list(cyc[1:]) + [cyc[0]]):
                img[a] = b
        return cls(img)

    @property
    def degree(self) -> int:
        return len(self.image)

    def __call__(self, x: int) -> int:
        return self.image[x]

    def __mul__(self, other: "Permutation") -> "Permutation":
        img = self.image
        return Permutation(img[x] for x in other.image)

    def inverse(self) -> "Permutation":
        inv = [0] * len(self.image)
        for x, y in enumerate(self.image):
            inv[y] = x
        return Permutation(inv)

    def is_identity(self) -> bool:
        return all(x == y for x, y in enumerate(self.image))

    def is_involution(self) -> bool:
        return (self * self).is_identity()

    def moved_points(self) -> list[int]:
        return [x for x, y in enumerate(self.image) if x != y]

    def __eq__(self, other) -> bool:
        return isinstance(other, Permutation) and self.image == other.image

    def __lt__(self, other: "Permutation") -> bool:
        return self.image < other.image

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        seen, cycles = set(), []
        for x in range(self.degree):
            if x in seen or self.image[x] == x:
                continue
            cyc, y = [x], self.image[x]
            seen.add(x)
            while y != x:
                seen.add(y)
                cyc.append(y)
                y = self.image[y]
            cycles.append("(" + " ".join(map(str, cyc)) + ")")
        return "Permutation(" + ("".join(cycles) or "()") + ")"


class PermutationAction:
    """A group given by generators acting on ``0..degree-1``."""

    def __init__(self, degree: int, generators: Sequence[Permutation]):
        gens = [g if isinstance(g, Permutation) else Permutation(g) for g in generators]
        if not gens:
            raise GroupError("an action needs at least one generator")
        if any(g.degree != degree for g in gens):
            raise GroupError(f"generators must all have degree {degree}")
        self.degree = degree
        self.generators = tuple(gens)

    def __repr__(self) -> str:
        return f"PermutationAction(degree={self.degree}, generators={len(self.generators)})"


@dataclass(frozen=True)
class StabilizerData:
    base_point: int
    orbit: tuple[int, ...]
    transversal: dict  # vertex -> tuple of generator indices, applied left to right
    stabilizer_generators: tuple[Permutation, ...]
    action: PermutationAction

    def coset_rep(self, v: int) -> Permutation:
        """The permutation sending the base point to ``v``."""
        p = Permutation.identity(self.action.degree)
        for k in self.transversal[v]:
            p = self.action.generators[k] * p
        return p

    def stabilizer_action(self) -> PermutationAction:
        gens = self.stabilizer_generators or (Permutation.identity(self.action.degree),)
        return PermutationAction(self.action.degree, gens)


def orbit_partition(a: PermutationAction, seeds: Iterable[int] | None = None) -> list[list[int]]:
    """Orbits of the generated group, each sorted, ordered by least element.

    With ``seeds`` only the orbits meeting the seeds are returned.
    """
    parent = list(range(a.degree))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for g in a.generators:
        for x, y in enumerate(g.image):
            rx, ry = find(x), find(y)
            if rx != ry:
                parent[max(rx, ry)] = min(rx, ry)
    blocks: dict[int, list[int]] = {}
    for x in range(a.degree):
        blocks.setdefault(find(x), []).append(x)
    orbits = sorted(blocks.values())
    if seeds is not None:
        wanted = set(seeds)
        orbits = [o for o in orbits if wanted.intersection(o)]
    return orbits


def stabilizer(a: PermutationAction, x0: int) -> StabilizerData:
    if not 0 <= x0 < a.degree:
        raise GroupError(f"base point {x0} out of range")
    words = {x0: ()}
    reps = {x0: Permutation.identity(a.degree)}
    queue = deque([x0])
    while queue:
        v = queue.popleft()
        for k, g in enumerate(a.generators):
            w = g(v)
            if w not in words:
                words[w] = words[v] + (k,)
                reps[w] = g * reps[v]
                queue.append(w)
    schreier = []
    seen = set()
    for v in words:
        for g in a.generators:
            s = reps[g(v)].inverse() * g * reps[v]
            assert s(x0) == x0
            if not s.is_identity() and s not in seen:
                seen.add(s)
                schreier.append(s)
    return StabilizerData(x0, tuple(words), words, tuple(schreier), a)


def group_order(a: PermutationAction) -> int:
    """Order via a chain of orbit-stabilizer steps on moved points."""
    gens = [g for g in a.generators if not g.is_identity()]
    order = 1
    while gens:
        x = min(min(g.moved_points()) for g in gens)
        st = stabilizer(PermutationAction(a.degree, gens), x)
        order *= len(st.orbit)
        gens = list(st.stabilizer_generators)
    return order


def is_colour_preserving(a: PermutationAction, g: EdgeColouredGraph) -> bool:
    if a.degree != g.vertex_count:
        raise GroupError(f"action degree {a.degree} differs from vertex count {g.vertex_count}")
    for p in a.generators:
        for u, v, c in g.edges:
            if g.colour(p(u), p(v)) != c:
                return False
    return True


def is_transitive(a: PermutationAction) -> bool:
    return len(orbit_partition(a)) == 1


def b_orbits(a: PermutationAction, x0: int = 0) -> list[list[int]]:
    """Orbits of the stabilizer of ``x0``, with ``[x0]`` first."""
    orbits = orbit_partition(stabilizer(a, x0).stabilizer_action())
    orbits.sort(key=lambda o: (x0 not in o, o[0]))
    return orbits


@dataclass(frozen=True)
class StrongTransitivityReport:
    transitive: bool
    b_orbit_count: int
    algebra_dim: int
    strongly_transitive: bool


def strong_transitivity_report(g: EdgeColouredGraph, a: PermutationAction, ab, base: int = 0) -> StrongTransitivityReport:
    if not is_colour_preserving(a, g):
        raise GroupError("action does not preserve edge colours")
    transitive = is_transitive(a)
    count = len(b_orbits(a, base))
    dim = len(ab)
    return StrongTransitivityReport(transitive, count, dim, transitive and count == dim)


def architecture_from_action(g: EdgeColouredGraph, a: PermutationAction, ab, base: int = 0):
    """Coherent configuration whose classes are the translates of the B-orbits."""
    from .architecture import order_by_expression, verify_architecture
    from .linalg import RationalMatrix

    report = strong_transitivity_report(g, a, ab, base)
    if not report.strongly_transitive:
        raise GroupError(f"action is not strongly transitive: {report.b_orbit_count} B-orbits, dim {report.algebra_dim}")
    st = stabilizer(a, base)
    n = g.vertex_count
    reps = [st.coset_rep(v).image for v in range(n)]
    candidates = []
    for orb in b_orbits(a, base):
        m = np.zeros((n, n), dtype=np.int64)
        for v in range(n):
            m[v, [reps[v][y] for y in orb]] = 1
        candidates.append(RationalMatrix(m))
    return verify_architecture(g, ab, order_by_expression(ab, candidates))


def subgroup_action(a: PermutationAction, gens: Sequence[Permutation]) -> PermutationAction:
    return PermutationAction(a.degree, list(gens) or [Permutation.identity(a.degree)])


def cayley_graph(generators: Sequence[Permutation], involution_check: bool = True) -> tuple[EdgeColouredGraph, list[Permutation]]:
    """Colour-``i`` edge between ``x`` and ``s_i * x``; vertices in BFS order from the identity."""
    if not generators:
        raise GroupError("need at least one generator")
    if involution_check:
        bad = [i + 1 for i, s in enumerate(generators) if not s.is_involution() or s.is_identity()]
        if bad:
            raise GroupError(f"generators {bad} are not involutions")
    e = Permutation.identity(generators[0].degree)
    elements = [e]
    index = {e: 0}
    queue = deque([e])
    while queue:
        x = queue.popleft()
        for s in generators:
            y = s * x
            if y not in index:
                index[y] = len(elements)
                elements.append(y)
                queue.append(y)
    edges = set()
    for x, i in index.items():
        for c, s in enumerate(generators, 1):
            j = index[s * x]
            if i != j:
                edges.add((min(i, j), max(i, j), c))
    return EdgeColouredGraph(len(elements), len(generators), sorted(edges)), elements


# text format

def parse_group(text: str) -> PermutationAction:
    """Parse ``group / degree m / perm i0 i1 ...`` lines."""
    degree = None
    perms = []
    header = False
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        try:
            if parts == ["group"]:
                header = True
            elif parts[0] == "degree" and len(parts) == 2:
                degree = int(parts[1])
            elif parts[0] == "perm":
                perms.append(Permutation(int(x) for x in parts[1:]))
            else:
                raise GroupError(f"line {lineno}: unrecognised {raw!r}")
        except ValueError as exc:
            raise GroupError(f"line {lineno}: {exc}") from None
    if not header or degree is None:
        raise GroupError("missing 'group' header or 'degree' line")
    return PermutationAction(degree, perms)


def format_group(a: PermutationAction) -> str:
    lines = ["group", f"degree {a.degree}"]
    lines += ["perm " + " ".join(map(str, p.image)) for p in a.generators]
    return "\n".join(lines) + "\n"
