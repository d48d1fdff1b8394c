"""Line spaces, their chamber systems, and the standard planes.

Also builds the permutation actions of the classical symmetry groups on the
flags of those planes.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, product
from typing import Iterable, Sequence

from .graph import EdgeColouredGraph
from .groups import Permutation, PermutationAction

MAX_Q = 64


class GeometryError(ValueError):
    pass


def _factor_prime_power(q: int) -> tuple[int, int]:
    if q < 2:
        raise GeometryError(f"{q} is not a prime power")
    p = next(d for d in range(2, q + 1) if q % d == 0)
    a, r = 0, q
    while r % p == 0:
        r //= p
        a += 1
    if r != 1:
        raise GeometryError(f"{q} is not a prime power")
    return p, a


def is_prime_power(q: int) -> bool:
    try:
        _factor_prime_power(q)
    except GeometryError:
        return False
    return True


def _poly_mod(num: list[int], den: list[int], p: int) -> list[int]:
    # coefficient lists are constant-term first; den is monic
    num = list(num)
    while len(num) >= len(den):
        c = num[-1] % p
        shift = len(num) - len(den)
        if c:
            for i, d in enumerate(den):
                num[shift + i] = (num[shift + i] - c * d) % p
        num.pop()
    return num


def _monic_polys(p: int, degree: int):
    # lexicographic in (a_{deg-1}, ..., a_0)
    for coeffs in product(range(p), repeat=degree):
        yield list(reversed(coeffs)) + [1]


def _is_irreducible(f: list[int], p: int) -> bool:
    degree = len(f) - 1
    for d in range(1, degree):
        for g in _monic_polys(p, d):
            if not any(_poly_mod(f, g, p)):
                return False
    return True


class FiniteField:
    """GF(p^a) with elements encoded as integers ``0..q-1``.

    Element ``x`` stands for the polynomial whose base-``p`` digits (least
    significant first) are its coefficients; the modulus is the first monic
    irreducible polynomial of degree ``a`` in lexicographic order.
    """

    def __init__(self, q: int):
        p, a = _factor_prime_power(q)
        if q > MAX_Q:
            raise GeometryError(f"field order {q} exceeds the bound {MAX_Q}")
        self.q, self.p, self.degree = q, p, a
        self.modulus = next(f for f in _monic_polys(p, a) if _is_irreducible(f, p))
        digits = [self._digits(x) for x in range(q)]
        self.add_table = [[self._encode([(u + v) % p for u, v in zip(dx, dy)]) for dy in digits] for dx in digits]
        self.mul_table = [[self._mul(dx, dy) for dy in digits] for dx in digits]
        self.neg_table = [self._encode([(-u) % p for u in d]) for d in digits]
        self.inv_table = [0] * q
        for x in range(1, q):
            self.inv_table[x] = next(y for y in range(1, q) if self.mul_table[x][y] == 1)
        self.primitive = next(g for g in range(2, q) if self._order(g) == q - 1) if q > 2 else 1

    def _digits(self, x: int) -> list[int]:
        out = []
        for _ in range(self.degree):
            out.append(x % self.p)
            x //= self.p
        return out

    def _encode(self, digits: Sequence[int]) -> int:
        return sum(d * self.p ** i for i, d in enumerate(digits))

    def _mul(self, dx: list[int], dy: list[int]) -> int:
        prod = [0] * (2 * self.degree - 1)
        for i, u in enumerate(dx):
            for j, v in enumerate(dy):
                prod[i + j] = (prod[i + j] + u * v) % self.p
        rem = _poly_mod(prod, self.modulus, self.p)
        return self._encode(rem + [0] * (self.degree - len(rem)))

    def _order(self, g: int) -> int:
        k, x = 1, g
        while x != 1:
            x = self.mul_table[x][g]
            k += 1
        return k

    def __repr__(self) -> str:
        return f"FiniteField({self.q})"

    @property
    def elements(self) -> range:
        return range(self.q)

    def add(self, x: int, y: int) -> int:
        return self.add_table[x][y]

    def mul(self, x: int, y: int) -> int:
        return self.mul_table[x][y]

    def neg(self, x: int) -> int:
        return self.neg_table[x]

    def sub(self, x: int, y: int) -> int:
        return self.add_table[x][self.neg_table[y]]

    def inv(self, x: int) -> int:
        if x == 0:
            raise ZeroDivisionError("zero has no inverse")
        return self.inv_table[x]

    def dot(self, u: Sequence[int], v: Sequence[int]) -> int:
        acc = 0
        for a, b in zip(u, v):
            acc = self.add_table[acc][self.mul_table[a][b]]
        return acc

    def vec_mat(self, v: Sequence[int], m: Sequence[Sequence[int]]) -> tuple[int, ...]:
        """Row vector times matrix."""
        return tuple(self.dot(v, [row[j] for row in m]) for j in range(len(m[0])))

    def normalize(self, v: Sequence[int]) -> tuple[int, ...]:
        """Scale so that the first nonzero coordinate is 1."""
        lead = next(x for x in v if x)
        s = self.inv_table[lead]
        return tuple(self.mul_table[s][x] for x in v)


class LineSpace:
    """Points ``0..m-1`` and lines given as point sets of size at least 2."""

    def __init__(self, point_count: int, lines: Iterable[Iterable[int]]):
        canon = sorted({tuple(sorted(set(int(p) for p in line))) for line in lines})
        for line in canon:
            if len(line) < 2:
                raise GeometryError(f"line {list(line)} has fewer than 2 points")
            if line[0] < 0 or line[-1] >= point_count:
                raise GeometryError(f"line {list(line)} has a point out of range")
        self.point_count = point_count
        self.lines: tuple[tuple[int, ...], ...] = tuple(canon)
        self._line_index = {line: i for i, line in enumerate(self.lines)}

    def __repr__(self) -> str:
        return f"LineSpace(points={self.point_count}, lines={len(self.lines)})"

    def line_index(self, points: Iterable[int]) -> int:
        return self._line_index[tuple(sorted(points))]

    def lines_through(self, p: int) -> list[int]:
        return [i for i, line in enumerate(self.lines) if p in line]

    def flags(self) -> list["Flag"]:
        return sorted(Flag(p, l) for l, line in enumerate(self.lines) for p in line)

    def is_linear(self) -> bool:
        """Any two distinct points lie on exactly one common line."""
        count = {}
        for line in self.lines:
            for pair in combinations(line, 2):
                count[pair] = count.get(pair, 0) + 1
        return (len(count) == self.point_count * (self.point_count - 1) // 2
                and all(v == 1 for v in count.values()))

    def is_projective_plane(self) -> bool:
        if not self.is_linear() or len(self.lines) < 3:
            return False
        sets = [set(l) for l in self.lines]
        if not all(len(a & b) == 1 for a, b in combinations(sets, 2)):
            return False
        # non-degenerate: some four points with no three collinear
        return all(len(l) >= 3 for l in self.lines)

    def is_affine_plane(self) -> bool:
        if not self.is_linear() or len(self.lines) < 2:
            return False
        sets = [set(l) for l in self.lines]
        for line in sets:
            for p in range(self.point_count):
                if p in line:
                    continue
                parallels = [m for m in sets if p in m and not (m & line)]
                if len(parallels) != 1:
                    return False
        return len({len(l) for l in sets}) == 1 and len(sets[0]) >= 2


@dataclass(frozen=True, order=True)
class Flag:
    p: int
    l: int


def chamber_system(ls: LineSpace) -> tuple[EdgeColouredGraph, dict[Flag, int]]:
    """Flag graph: colour 1 joins flags on a common line, colour 2 on a common point."""
    flags = ls.flags()
    index = {f: i for i, f in enumerate(flags)}
    by_line: dict[int, list[int]] = {}
    by_point: dict[int, list[int]] = {}
    for i, f in enumerate(flags):
        by_line.setdefault(f.l, []).append(i)
        by_point.setdefault(f.p, []).append(i)
    edges = []
    for colour, groups in ((1, by_line), (2, by_point)):
        for members in groups.values():
            edges.extend((u, v, colour) for u, v in combinations(members, 2))
    if not any(c == 2 for *_, c in edges):
        raise GeometryError("no point lies on two lines: colour 2 never occurs")
    return EdgeColouredGraph(len(flags), 2, edges), index


def projective_plane(q: int) -> LineSpace:
    """Desarguesian plane: 1- and 2-dimensional subspaces of GF(q)^3."""
    return _projective(FiniteField(q))[0]


def _projective(F: FiniteField):
    vectors = sorted({F.normalize(v) for v in product(F.elements, repeat=3) if any(v)})
    pindex = {v: i for i, v in enumerate(vectors)}
    lines = [[pindex[v] for v in vectors if F.dot(v, n) == 0] for n in vectors]
    return LineSpace(len(vectors), lines), vectors, pindex


def affine_plane(q: int) -> LineSpace:
    """Desarguesian plane on GF(q)^2; point ``(x, y)`` has index ``x * q + y``."""
    F = FiniteField(q)
    lines = set()
    directions = [(0, 1)] + [(1, m) for m in F.elements]
    for dx, dy in directions:
        for x0, y0 in product(F.elements, repeat=2):
            pts = frozenset(F.add(x0, F.mul(t, dx)) * q + F.add(y0, F.mul(t, dy)) for t in F.elements)
            lines.add(pts)
    return LineSpace(q * q, lines)


def clique_plane(q: int) -> LineSpace:
    """Complete graph on ``q + 2`` points as a line space."""
    if q < 2:
        raise GeometryError("clique planes need q >= 2")
    return LineSpace(q + 2, combinations(range(q + 2), 2))


PETERSEN_POINTS = tuple(combinations(range(1, 6), 2))


def petersen_linespace() -> LineSpace:
    """Kneser model: 2-subsets of {1..5}, a line for every disjoint pair."""
    lines = [(i, j) for i, j in combinations(range(10), 2)
             if not set(PETERSEN_POINTS[i]) & set(PETERSEN_POINTS[j])]
    return LineSpace(10, lines)


def parse_linespace(text: str) -> LineSpace:
    """Parse ``linespace / points m / line i1 i2 ...`` lines."""
    points = None
    lines = []
    header = False
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        try:
            if parts == ["linespace"]:
                header = True
            elif parts[0] == "points" and len(parts) == 2:
                points = int(parts[1])
            elif parts[0] == "line":
                lines.append([int(x) for x in parts[1:]])
            else:
                raise GeometryError(f"line {lineno}: unrecognised {raw!r}")
        except ValueError as exc:
            raise GeometryError(f"line {lineno}: {exc}") from None
    if not header or points is None:
        raise GeometryError("missing 'linespace' header or 'points' line")
    return LineSpace(points, lines)


def format_linespace(ls: LineSpace) -> str:
    out = ["linespace", f"points {ls.point_count}"]
    out += ["line " + " ".join(map(str, line)) for line in ls.lines]
    return "\n".join(out) + "\n"


# symmetry actions on flags

def induced_flag_action(ls: LineSpace, flag_index: dict[Flag, int],
                        point_maps: Sequence[Sequence[int]]) -> PermutationAction:
    """Push point permutations that preserve the line set onto the flags."""
    gens = []
    for pm in point_maps:
        line_map = []
        for line in ls.lines:
            image = tuple(sorted(pm[p] for p in line))
            if image not in ls._line_index:
                raise GeometryError("point map does not preserve lines")
            line_map.append(ls._line_index[image])
        img = [0] * len(flag_index)
        for f, i in flag_index.items():
            img[i] = flag_index[Flag(pm[f.p], line_map[f.l])]
        gens.append(Permutation(img))
    return PermutationAction(len(flag_index), gens)


def _gl_generators(F: FiniteField, n: int) -> list[list[list[int]]]:
    """Generators of GL_n(F): a diagonal primitive element, one transvection, coordinate permutations."""
    def eye():
        return [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    diag = eye()
    diag[0][0] = F.primitive
    trans = eye()
    trans[0][1] = 1
    swap = eye()
    swap[0][0] = swap[1][1] = 0
    swap[0][1] = swap[1][0] = 1
    gens = [diag, trans, swap]
    if n > 2:
        cycle = [[1 if j == (i + 1) % n else 0 for j in range(n)] for i in range(n)]
        gens.append(cycle)
    return gens


def affine_symmetries(q: int) -> tuple[LineSpace, EdgeColouredGraph, dict[Flag, int], PermutationAction]:
    """AGL_2(q) acting on the flags of the affine plane of order q."""
    F = FiniteField(q)
    ls = affine_plane(q)
    g, index = chamber_system(ls)
    pts = list(product(F.elements, repeat=2))
    maps = []
    for t in ((1, 0), (0, 1)):
        maps.append([F.add(x, t[0]) * q + F.add(y, t[1]) for x, y in pts])
    for m in _gl_generators(F, 2):
        maps.append([(lambda v: v[0] * q + v[1])(F.vec_mat((x, y), m)) for x, y in pts])
    return ls, g, index, induced_flag_action(ls, index, maps)


def projective_symmetries(q: int) -> tuple[LineSpace, EdgeColouredGraph, dict[Flag, int], PermutationAction]:
    """GL_3(q) acting on the flags of PG(2, q)."""
    F = FiniteField(q)
    ls, vectors, pindex = _projective(F)
    g, index = chamber_system(ls)
    maps = [[pindex[F.normalize(F.vec_mat(v, m))] for v in vectors] for m in _gl_generators(F, 3)]
    return ls, g, index, induced_flag_action(ls, index, maps)


def _ground_generators(k: int) -> list[list[int]]:
    transposition = [1, 0] + list(range(2, k))
    cycle = [(i + 1) % k for i in range(k)]
    return [transposition, cycle]


def clique_symmetries(q: int) -> tuple[LineSpace, EdgeColouredGraph, dict[Flag, int], PermutationAction]:
    """S_{q+2} acting on the clique plane of order q."""
    ls = clique_plane(q)
    g, index = chamber_system(ls)
    return ls, g, index, induced_flag_action(ls, index, _ground_generators(q + 2))


def petersen_symmetries() -> tuple[LineSpace, EdgeColouredGraph, dict[Flag, int], PermutationAction]:
    """S_5 acting on the flags of the Petersen line space."""
    ls = petersen_linespace()
    g, index = chamber_system(ls)
    pidx = {frozenset(pt): i for i, pt in enumerate(PETERSEN_POINTS)}
    maps = []
    for s in _ground_generators(5):
        maps.append([pidx[frozenset(s[a - 1] + 1 for a in pt)] for pt in PETERSEN_POINTS])
    return ls, g, index, induced_flag_action(ls, index, maps)


def clique_pair_labels(q: int, flag_index: dict[Flag, int]) -> dict[int, tuple[int, int]]:
    """Vertex -> ordered pair ``(i, j)``: the flag (point i, line {i, j})."""
    ls = clique_plane(q)
    out = {}
    for f, v in flag_index.items():
        a, b = ls.lines[f.l]
        out[v] = (f.p, b if f.p == a else a)
    return out
