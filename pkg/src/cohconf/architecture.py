"""Architectures (coherent configurations inside an adjacency algebra):
verification, canonical constructions, intersection numbers, spheres, and
the affine-plane multiplicity and spectrum checks."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .algebra import AlgebraBasis, algebra_closure, is_commutative, render_terms
from .geometry import Flag, LineSpace, chamber_system, clique_pair_labels, clique_plane
from .graph import EdgeColouredGraph, adjacency_operator, distance_matrices
from .linalg import EchelonSpan, RationalMatrix, mat_mul, nullity, poly_eval, poly_mul, rank

EXHAUSTIVE_LIMIT = 60
SAMPLES_PER_CLASS = 50
DEFAULT_SEED = 20240611


class ArchitectureError(ValueError):
    """Raised with a list of ``(check, witness)`` failures."""

    def __init__(self, failures: list[tuple[str, str]]):
        self.failures = failures
        super().__init__("; ".join(f"{name}: {witness}" for name, witness in failures))


@dataclass
class CoherentConfiguration:
    classes: tuple[RationalMatrix, ...]
    intersection: np.ndarray  # a[i, j, k] with A_i A_j = sum_k a[i, j, k] A_k
    transpose_perm: tuple[int, ...]
    expressions: tuple[tuple[Fraction, ...], ...]  # coordinates in the monomial basis
    words: tuple[tuple[int, ...], ...]
    _labels: np.ndarray | None = field(default=None, repr=False)

    def __len__(self) -> int:
        return len(self.classes)

    @property
    def size(self) -> int:
        return self.classes[0].rows

    def expression_text(self, i: int) -> str:
        return render_terms(list(zip(self.expressions[i], self.words)))

    def expression_texts(self) -> list[str]:
        return [self.expression_text(i) for i in range(len(self))]

    def valencies(self) -> list[int]:
        """Row sums of the class matrices (equal on every row)."""
        return [int(m.numerator[0].sum()) for m in self.classes]

    def label_matrix(self) -> np.ndarray:
        """``L[x, y]`` = index of the class containing ``(x, y)``."""
        if self._labels is None:
            lab = np.full((self.size, self.size), -1, dtype=np.int64)
            for i, m in enumerate(self.classes):
                lab[m.support()] = i
            self._labels = lab
        return self._labels

    def class_sets(self) -> frozenset:
        return frozenset(self.classes)

    def reordered(self, perm: Sequence[int]) -> "CoherentConfiguration":
        """New configuration whose class ``i`` is the old class ``perm[i]``."""
        perm = list(perm)
        if sorted(perm) != list(range(len(self))) or perm[0] != 0:
            raise ValueError("reordering must be a permutation fixing the identity class")
        inv = {old: new for new, old in enumerate(perm)}
        a = self.intersection[np.ix_(perm, perm, perm)]
        return CoherentConfiguration(
            tuple(self.classes[p] for p in perm),
            a,
            tuple(inv[self.transpose_perm[p]] for p in perm),
            tuple(self.expressions[p] for p in perm),
            self.words,
        )


def _expression_key(coords: Sequence[Fraction]):
    top = max(k for k, c in enumerate(coords) if c)
    return (top, tuple(-c for c in reversed(coords)))


def order_by_expression(ab: AlgebraBasis, candidates: Sequence[RationalMatrix]) -> list[RationalMatrix]:
    """Sort classes by the latest basis monomial their expression uses."""
    keyed = []
    for m in candidates:
        coords = ab.coordinates(m)
        if coords is None:
            raise ArchitectureError([("in_span", "candidate is not in the adjacency algebra")])
        keyed.append((_expression_key(coords), m))
    keyed.sort(key=lambda t: t[0])
    return [m for _, m in keyed]


def verify_architecture(g: EdgeColouredGraph, ab: AlgebraBasis, candidates: Sequence[RationalMatrix]) -> CoherentConfiguration:
    """Check that ``candidates`` form a Coxeter basis of ``ab``.

    Every failed check is reported by name with a witness.
    """
    n = g.vertex_count
    cands = list(candidates)
    failures: list[tuple[str, str]] = []
    for i, m in enumerate(cands):
        if m.shape != (n, n):
            raise ArchitectureError([("shape", f"candidate {i} has shape {m.shape}, expected {(n, n)}")])
    for i, m in enumerate(cands):
        if not m.is_01():
            failures.append(("entries_01", f"candidate {i} has entries outside {{0,1}}"))
    eye = RationalMatrix.identity(n)
    if eye not in cands:
        failures.append(("identity", "the identity matrix is not a candidate"))
    elif cands[0] != eye:
        cands.insert(0, cands.pop(cands.index(eye)))
    total = np.zeros((n, n), dtype=np.int64)
    for m in cands:
        total += m.numerator != 0
    if (total > 1).any():
        x, y = map(int, np.argwhere(total > 1)[0])
        failures.append(("disjoint", f"entry ({x}, {y}) lies in several candidates"))
    if (total == 0).any():
        x, y = map(int, np.argwhere(total == 0)[0])
        failures.append(("sum_J", f"entry ({x}, {y}) is covered by no candidate"))
    expressions = []
    for i, m in enumerate(cands):
        coords = ab.coordinates(m)
        if coords is None:
            failures.append(("in_span", f"candidate {i} is not in the adjacency algebra"))
        expressions.append(coords)
    span = EchelonSpan(n * n)
    for i, m in enumerate(cands):
        span, new = span.insert(m)
        if not new:
            failures.append(("independent", f"candidate {i} depends on the earlier ones"))
    if len(cands) != len(ab):
        failures.append(("count ≠ dim", f"count {len(cands)} ≠ dim {len(ab)}"))
    if failures:
        raise ArchitectureError(failures)

    d1 = len(cands)
    a = np.zeros((d1, d1, d1), dtype=np.int64)
    for i, x in enumerate(cands):
        for j, y in enumerate(cands):
            coords = span.solve(mat_mul(x, y))
            if coords is None:
                failures.append(("products", f"A_{i} A_{j} leaves the span of the candidates"))
                continue
            for k, c in enumerate(coords):
                if c.denominator != 1 or c < 0:
                    failures.append(("intersection_N", f"a[{i},{j},{k}] = {c} is not a nonnegative integer"))
                a[i, j, k] = int(c)
    lookup = {m: i for i, m in enumerate(cands)}
    tperm = []
    for i, m in enumerate(cands):
        j = lookup.get(m.T)
        if j is None:
            failures.append(("transpose", f"transpose of candidate {i} is not a candidate"))
            j = -1
        tperm.append(j)
    if failures:
        raise ArchitectureError(failures)
    return CoherentConfiguration(tuple(cands), a, tuple(tperm), tuple(tuple(e) for e in expressions), ab.words)


def check_axioms(cc: CoherentConfiguration) -> list[str]:
    """Re-check the configuration axioms directly; returns failed axiom names."""
    n = cc.size
    bad = []
    if cc.classes[0] != RationalMatrix.identity(n):
        bad.append("identity")
    total = cc.classes[0]
    for m in cc.classes[1:]:
        total = total + m
    if total != RationalMatrix.ones(n) or not all(m.is_01() for m in cc.classes):
        bad.append("sum_J")
    if any(cc.classes[cc.transpose_perm[i]] != m.T for i, m in enumerate(cc.classes)):
        bad.append("transpose")
    tp = cc.transpose_perm
    if tp[0] != 0 or any(tp[tp[i]] != i for i in range(len(tp))):
        bad.append("transpose_involution")
    if (cc.intersection < 0).any():
        bad.append("nonnegative")
    for i, x in enumerate(cc.classes):
        for j, y in enumerate(cc.classes):
            lhs = mat_mul(x, y)
            rhs = RationalMatrix.zeros(n)
            for k, m in enumerate(cc.classes):
                if cc.intersection[i, j, k]:
                    rhs = rhs + m.scale(int(cc.intersection[i, j, k]))
            if lhs != rhs:
                bad.append(f"product_{i}_{j}")
    return bad


def symmetric_iff_commutative(cc: CoherentConfiguration, ab: AlgebraBasis) -> bool:
    """Both sides computed independently; True when they agree."""
    symmetric = all(m == m.T for m in cc.classes)
    return symmetric == is_commutative(ab)


def intersection_tensor(cc: CoherentConfiguration) -> np.ndarray:
    return cc.intersection


def intersection_counts_match(cc: CoherentConfiguration, seed: int = DEFAULT_SEED,
                              exhaustive_limit: int = EXHAUSTIVE_LIMIT,
                              samples: int = SAMPLES_PER_CLASS) -> bool:
    """Count intermediate vertices directly and compare with the tensor.

    For ``(x, z)`` in class ``k`` the number of ``y`` with ``(x, y)`` in
    class ``i`` and ``(y, z)`` in class ``j`` must be ``a[i, j, k]``.
    Exhaustive up to ``exhaustive_limit`` vertices, sampled above.
    """
    lab = cc.label_matrix()
    n = cc.size
    d1 = len(cc)
    rng = random.Random(seed)
    for k in range(d1):
        pairs = [tuple(map(int, p)) for p in np.argwhere(lab == k)]
        if n > exhaustive_limit and len(pairs) > samples:
            pairs = rng.sample(pairs, samples)
        for x, z in pairs:
            counts = np.zeros((d1, d1), dtype=np.int64)
            np.add.at(counts, (lab[x, :], lab[:, z]), 1)
            if not np.array_equal(counts, cc.intersection[:, :, k]):
                return False
    return True


@dataclass(frozen=True)
class SphereLabelling:
    base: int
    labels: tuple[int, ...]
    direction: str

    def sphere_sizes(self, classes: int) -> list[int]:
        sizes = [0] * classes
        for lab in self.labels:
            sizes[lab] += 1
        return sizes


def sphere_labels(cc: CoherentConfiguration, x0: int, direction: str = "from-base") -> SphereLabelling:
    """Class of ``(x0, y)`` for every ``y``; ``to-base`` uses ``(y, x0)``."""
    lab = cc.label_matrix()
    if direction == "from-base":
        row = lab[x0, :]
    elif direction == "to-base":
        row = lab[:, x0]
    else:
        raise ValueError(f"unknown label direction {direction!r}")
    return SphereLabelling(x0, tuple(int(v) for v in row), direction)


# canonical constructions

def _require_chamber_system(ls: LineSpace, g: EdgeColouredGraph, flag_index: dict[Flag, int]) -> None:
    if not g.is_connected():
        raise ArchitectureError([("connected", "graph is disconnected")])
    expected, index = chamber_system(ls)
    if expected != g or index != flag_index:
        raise ArchitectureError([("chamber_system", "graph is not the chamber system of the line space")])


def _class_matrices(n: int, classify, count: int) -> list[RationalMatrix]:
    mats = [np.zeros((n, n), dtype=np.int64) for _ in range(count)]
    for x in range(n):
        for y in range(n):
            mats[classify(x, y)][x, y] = 1
    return [RationalMatrix(m) for m in mats]


def _flag_pairs(ls: LineSpace, flag_index: dict[Flag, int]):
    flags = [None] * len(flag_index)
    for f, i in flag_index.items():
        flags[i] = f
    return flags, [set(l) for l in ls.lines]


def canonical_affine_architecture(ls: LineSpace, g: EdgeColouredGraph, flag_index: dict[Flag, int]) -> list[RationalMatrix]:
    """Seven relative positions of flags, ordered I, T1, T2, T12, T21, T121, T212*."""
    if not ls.is_affine_plane():
        raise ArchitectureError([("affine_plane", "line space is not an affine plane")])
    _require_chamber_system(ls, g, flag_index)
    flags, lines = _flag_pairs(ls, flag_index)

    def classify(x, y):
        (p, l), (pp, ll) = (flags[x].p, flags[x].l), (flags[y].p, flags[y].l)
        if x == y:
            return 0
        if l == ll:
            return 1
        if p == pp:
            return 2
        meet = lines[l] & lines[ll]
        cases = [
            pp in lines[l],                                   # T12
            pp not in lines[l] and meet == {p},               # T21
            pp not in lines[l] and bool(meet) and meet != {p},  # T121
            not meet,                                          # parallel: T212*
        ]
        assert sum(cases) == 1, "relative positions must be exclusive and exhaustive"
        return 3 + cases.index(True)

    return _class_matrices(g.vertex_count, classify, 7)


def canonical_projective_architecture(ls: LineSpace, g: EdgeColouredGraph, flag_index: dict[Flag, int]) -> list[RationalMatrix]:
    """Six classes ordered I, T1, T2, T12, T21, T121."""
    if not ls.is_projective_plane():
        raise ArchitectureError([("projective_plane", "line space is not a projective plane")])
    _require_chamber_system(ls, g, flag_index)
    flags, lines = _flag_pairs(ls, flag_index)

    def classify(x, y):
        (p, l), (pp, ll) = (flags[x].p, flags[x].l), (flags[y].p, flags[y].l)
        if x == y:
            return 0
        if l == ll:
            return 1
        if p == pp:
            return 2
        fwd, back = pp in lines[l], p in lines[ll]
        # both would put p and p' on two distinct lines
        assert not (fwd and back)
        return 3 if fwd else 4 if back else 5

    return _class_matrices(g.vertex_count, classify, 6)


def canonical_clique_architecture(q: int, g: EdgeColouredGraph, flag_index: dict[Flag, int]) -> list[RationalMatrix]:
    """Seven classes of ordered pairs, ordered I, T1, T2, T12, T21, T121, T212*."""
    _require_chamber_system(clique_plane(q), g, flag_index)
    pairs = clique_pair_labels(q, flag_index)

    def classify(x, y):
        i0, j0 = pairs[x]
        a, b = pairs[y]
        if (a, b) == (i0, j0):
            return 0
        if (a, b) == (j0, i0):
            return 1
        if a == i0:
            return 2
        if a == j0:
            return 3
        if b == i0:
            return 4
        if b == j0:
            return 5
        return 6

    return _class_matrices(g.vertex_count, classify, 7)


def distance_regular_architecture(g: EdgeColouredGraph) -> CoherentConfiguration:
    """Distance classes of a connected monochrome graph, verified as an architecture."""
    if g.colour_count != 1:
        raise ArchitectureError([("monochrome", "graph has more than one colour")])
    if not g.is_connected():
        raise ArchitectureError([("connected", "graph is disconnected")])
    ab = algebra_closure([adjacency_operator(g, 1)])
    return verify_architecture(g, ab, distance_matrices(g))


# affine planes: module multiplicities and spectrum

def _solve_exact(rows: list[list[int]], rhs: list[int]) -> list[Fraction] | None:
    """Unique solution of an overdetermined system, None if inconsistent or not unique."""
    aug = [[Fraction(x) for x in r] + [Fraction(b)] for r, b in zip(rows, rhs)]
    ncols = len(rows[0])
    piv_cols = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(aug)) if aug[i][c]), None)
        if p is None:
            continue
        aug[r], aug[p] = aug[p], aug[r]
        aug[r] = [x / aug[r][c] for x in aug[r]]
        for i in range(len(aug)):
            if i != r and aug[i][c]:
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[r])]
        piv_cols.append(c)
        r += 1
    if any(row[-1] for row in aug[r:]) or len(piv_cols) < ncols:
        return None
    return [aug[i][-1] for i in range(ncols)]


@dataclass(frozen=True)
class Multiplicities:
    n0: int
    n1: int
    n2: int
    n3: int
    nullities: dict

    def as_tuple(self) -> tuple[int, int, int, int]:
        return (self.n0, self.n1, self.n2, self.n3)


def affine_multiplicities(g: EdgeColouredGraph, ab: AlgebraBasis, q: int) -> Multiplicities:
    """Multiplicities of the 2-dimensional and three 1-dimensional modules.

    Measured from eigenspace dimensions of ``T1`` and ``T2`` and the joint
    ``(q-1, q)`` eigenspace, then solved exactly; the system is
    overdetermined and must be consistent.
    """
    t1, t2 = ab.generators
    n = g.vertex_count
    eye = RationalMatrix.identity(n)
    a1 = t1 - eye.scale(q - 1)
    a2 = t2 - eye.scale(q)
    stacked = RationalMatrix(np.vstack([a1.numerator, a2.numerator]).astype(object))
    nul = {
        "T2-qI": nullity(a2),
        "T2+I": nullity(t2 + eye),
        "T1-(q-1)I": nullity(a1),
        "T1+I": nullity(t1 + eye),
        "joint": n - rank(stacked),
    }
    rows = [[2, 1, 1, 1], [1, 0, 0, 1], [1, 1, 1, 0], [1, 0, 1, 1], [1, 1, 0, 0], [0, 0, 0, 1]]
    rhs = [n, nul["T2-qI"], nul["T2+I"], nul["T1-(q-1)I"], nul["T1+I"], nul["joint"]]
    sol = _solve_exact(rows, rhs)
    if sol is None or any(x.denominator != 1 or x < 0 for x in sol):
        raise ArchitectureError([("multiplicities", f"inconsistent eigenspace data {nul}")])
    n0, n1, n2, n3 = (int(x) for x in sol)
    return Multiplicities(n0, n1, n2, n3, nul)


@dataclass(frozen=True)
class SpectrumCheck:
    name: str
    expected: int
    observed: int

    @property
    def passed(self) -> bool:
        return self.expected == self.observed


@dataclass(frozen=True)
class SpectrumReport:
    q: int
    checks: tuple[SpectrumCheck, ...]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failing(self) -> list[str]:
        return [c.name for c in self.checks if not c.passed]


def affine_spectrum_certificate(g: EdgeColouredGraph, q: int) -> SpectrumReport:
    """Annihilating polynomial and eigenvalue multiplicities of ``T1 + T2``."""
    t = adjacency_operator(g, 1) + adjacency_operator(g, 2)
    n = g.vertex_count
    eye = RationalMatrix.identity(n)
    quad = [q * q - 4 * q + 2, -(2 * q - 3), 1]
    p = poly_mul(poly_mul(poly_mul([2, 1], [-(q - 2), 1]), [-(2 * q - 1), 1]), quad)
    checks = [
        SpectrumCheck("annihilator", 0, 0 if poly_eval(t, p).is_zero() else 1),
        SpectrumCheck("nullity(T+2I)", (q - 1) ** 2 * (q + 1), nullity(t + eye.scale(2))),
        SpectrumCheck("nullity(T-(q-2)I)", q, nullity(t - eye.scale(q - 2))),
        SpectrumCheck("nullity(T-(2q-1)I)", 1, nullity(t - eye.scale(2 * q - 1))),
        SpectrumCheck("nullity(T^2-(2q-3)T+(q^2-4q+2)I)", 2 * (q * q - 1), nullity(poly_eval(t, quad))),
    ]
    return SpectrumReport(q, tuple(checks))
