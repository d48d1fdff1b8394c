"""Exact dense linear algebra over the rationals.

Matrices are stored as an integer numerator array plus one positive common
denominator.  The numerator array is ``int64`` whenever every entry (and
every intermediate of the operation at hand) fits comfortably, and falls
back to a numpy ``object`` array of Python integers otherwise, so results
are always exact.
"""

from __future__ import annotations

import math
import operator
from fractions import Fraction
from functools import reduce
from typing import Iterable, Sequence

import numpy as np

Rational = Fraction

# products of two int64 arrays are computed in int64 only under this bound
_SAFE = 2**62


class DimensionError(ValueError):
    pass


def _maxabs(arr: np.ndarray) -> int:
    if arr.size == 0:
        return 0
    return int(np.max(np.abs(arr)))


def _shrink(arr: np.ndarray) -> np.ndarray:
    """Return ``arr`` as int64 if it fits, else as an object array."""
    if arr.dtype == np.int64:
        return arr
    if arr.size == 0 or _maxabs(arr) < _SAFE:
        return arr.astype(np.int64)
    return arr.astype(object)


def _gcd_all(arr: np.ndarray, start: int = 0) -> int:
    if arr.dtype == np.int64:
        g = int(np.gcd.reduce(arr, axis=None)) if arr.size else 0
        return math.gcd(g, start)
    return reduce(math.gcd, (int(x) for x in arr.flat), start)


class RationalMatrix:
    """Immutable dense matrix with exact rational entries."""

    __slots__ = ("_num", "_den", "_hash")

    def __init__(self, num, den: int = 1):
        if isinstance(num, np.ndarray) and num.dtype != object:
            if num.dtype.kind not in "biu":
                raise TypeError("numerator array must be integral")
            arr = num.astype(np.int64)
        else:
            arr = np.array(num, dtype=object)
            if arr.ndim == 2:
                # operator.index rejects Fractions and floats instead of truncating
                arr = np.vectorize(operator.index, otypes=[object])(arr) if arr.size else arr
        if arr.ndim != 2:
            raise DimensionError("matrix data must be two-dimensional")
        den = int(den)
        if den == 0:
            raise ZeroDivisionError("zero denominator")
        if den < 0:
            arr, den = -arr, -den
        if den != 1:
            g = _gcd_all(arr, den)
            if g > 1:
                arr = arr // g
                den //= g
        arr = _shrink(arr)
        arr.flags.writeable = False
        self._num = arr
        self._den = den
        self._hash = None

    # construction

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> "RationalMatrix":
        rows = [[Fraction(x) for x in row] for row in rows]
        if not rows:
            raise DimensionError("empty matrix")
        width = len(rows[0])
        if any(len(r) != width for r in rows):
            raise DimensionError("ragged rows")
        den = reduce(lambda a, b: a * b // math.gcd(a, b), (x.denominator for r in rows for x in r), 1)
        num = np.array([[x.numerator * (den // x.denominator) for x in r] for r in rows], dtype=object)
        return cls(num.reshape(len(rows), width), den)

    @classmethod
    def identity(cls, n: int) -> "RationalMatrix":
        return cls(np.eye(n, dtype=np.int64))

    @classmethod
    def zeros(cls, rows: int, cols: int | None = None) -> "RationalMatrix":
        return cls(np.zeros((rows, rows if cols is None else cols), dtype=np.int64))

    @classmethod
    def ones(cls, rows: int, cols: int | None = None) -> "RationalMatrix":
        return cls(np.ones((rows, rows if cols is None else cols), dtype=np.int64))

    # accessors

    @property
    def shape(self) -> tuple[int, int]:
        return self._num.shape

    @property
    def rows(self) -> int:
        return self._num.shape[0]

    @property
    def cols(self) -> int:
        return self._num.shape[1]

    @property
    def numerator(self) -> np.ndarray:
        return self._num

    @property
    def denominator(self) -> int:
        return self._den

    def is_integral(self) -> bool:
        return self._den == 1

    def is_square(self) -> bool:
        return self.rows == self.cols

    def __getitem__(self, ij) -> Fraction:
        i, j = ij
        return Fraction(int(self._num[i, j]), self._den)

    def entries(self) -> list[Fraction]:
        """Row-major list of entries."""
        return [Fraction(int(x), self._den) for x in self._num.flat]

    def to_lists(self) -> list[list[Fraction]]:
        return [[Fraction(int(x), self._den) for x in row] for row in self._num]

    def row(self, i: int) -> list[Fraction]:
        return [Fraction(int(x), self._den) for x in self._num[i]]

    def is_zero(self) -> bool:
        return not np.any(self._num)

    def is_01(self) -> bool:
        return self._den == 1 and bool(np.all((self._num == 0) | (self._num == 1)))

    def support(self) -> np.ndarray:
        """Boolean mask of nonzero entries."""
        return self._num != 0

    def trace(self) -> Fraction:
        return Fraction(int(np.trace(self._num)), self._den)

    def flat(self) -> tuple[np.ndarray, int]:
        """Flattened numerator vector and denominator."""
        return self._num.reshape(-1), self._den

    # arithmetic

    def transpose(self) -> "RationalMatrix":
        return RationalMatrix(np.ascontiguousarray(self._num.T), self._den)

    T = property(transpose)

    def _combine(self, other: "RationalMatrix", sign: int) -> "RationalMatrix":
        if self.shape != other.shape:
            raise DimensionError(f"shape mismatch {self.shape} vs {other.shape}")
        l = self._den * other._den // math.gcd(self._den, other._den)
        fa, fb = l // self._den, l // other._den
        a, b = self._num, other._num
        if (_maxabs(a) * fa + _maxabs(b) * fb) >= _SAFE or a.dtype == object or b.dtype == object:
            a, b = a.astype(object), b.astype(object)
        return RationalMatrix(a * fa + sign * (b * fb), l)

    def __add__(self, other: "RationalMatrix") -> "RationalMatrix":
        return self._combine(other, 1)

    def __sub__(self, other: "RationalMatrix") -> "RationalMatrix":
        return self._combine(other, -1)

    def __neg__(self) -> "RationalMatrix":
        return RationalMatrix(-self._num, self._den)

    def scale(self, c) -> "RationalMatrix":
        c = Fraction(c)
        a = self._num
        if a.dtype == object or _maxabs(a) * abs(c.numerator) >= _SAFE:
            a = a.astype(object)
        return RationalMatrix(a * c.numerator, self._den * c.denominator)

    def __mul__(self, c) -> "RationalMatrix":
        if isinstance(c, RationalMatrix):
            return NotImplemented
        return self.scale(c)

    __rmul__ = __mul__

    def __matmul__(self, other: "RationalMatrix") -> "RationalMatrix":
        return mat_mul(self, other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, RationalMatrix):
            return NotImplemented
        return (self.shape == other.shape and self._den == other._den
                and bool(np.array_equal(self._num, other._num)))

    def __hash__(self) -> int:
        if self._hash is None:
            data = (tuple(int(x) for x in self._num.flat) if self._num.dtype == object
                    else self._num.tobytes())
            self._hash = hash((self.shape, self._den, data))
        return self._hash

    def __repr__(self) -> str:
        if self.rows * self.cols > 64:
            return f"RationalMatrix({self.rows}x{self.cols})"
        return f"RationalMatrix({[[str(x) for x in r] for r in self.to_lists()]})"


def mat_mul(a: RationalMatrix, b: RationalMatrix) -> RationalMatrix:
    if a.cols != b.rows:
        raise DimensionError(f"cannot multiply {a.shape} by {b.shape}")
    x, y = a.numerator, b.numerator
    if x.dtype == object or y.dtype == object or _maxabs(x) * _maxabs(y) * max(a.cols, 1) >= _SAFE:
        prod = np.dot(x.astype(object), y.astype(object))
    else:
        prod = x @ y
    return RationalMatrix(prod, a.denominator * b.denominator)


def identity(n: int) -> RationalMatrix:
    return RationalMatrix.identity(n)


def poly_eval(m: RationalMatrix, coeffs: Sequence) -> RationalMatrix:
    """Evaluate ``sum(coeffs[k] * m**k)`` by Horner's scheme."""
    if not m.is_square():
        raise DimensionError("poly_eval needs a square matrix")
    n = m.rows
    eye = RationalMatrix.identity(n)
    acc = RationalMatrix.zeros(n)
    for c in reversed(list(coeffs)):
        acc = mat_mul(acc, m) + eye.scale(c)
    return acc


def poly_from_roots(roots: Iterable) -> list[Fraction]:
    """Coefficients (constant first) of ``prod(x - r)``."""
    coeffs = [Fraction(1)]
    for r in roots:
        r = Fraction(r)
        nxt = [Fraction(0)] * (len(coeffs) + 1)
        for k, c in enumerate(coeffs):
            nxt[k + 1] += c
            nxt[k] -= r * c
        coeffs = nxt
    return coeffs


def poly_mul(p: Sequence, q: Sequence) -> list[Fraction]:
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        for j, b in enumerate(q):
            out[i + j] += Fraction(a) * Fraction(b)
    return out


def rank(m: RationalMatrix) -> int:
    """Exact rank by fraction-free (Bareiss) elimination."""
    a = np.array(m.numerator, dtype=object)
    nrows, ncols = a.shape
    r = 0
    prev = 1
    for c in range(ncols):
        if r == nrows:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        p = r + int(nz[0])
        if p != r:
            a[[r, p]] = a[[p, r]]
        piv = a[r, c]
        below = a[r + 1:, c:]
        if below.shape[0]:
            # Bareiss update; the division by the previous pivot is exact
            below[:] = (below * piv - np.outer(a[r + 1:, c], a[r, c:])) // prev
        prev = piv
        r += 1
    return r


def nullity(m: RationalMatrix) -> int:
    return m.cols - rank(m)


def _primitive(v: np.ndarray, combo: list[Fraction], pivot: int) -> tuple[np.ndarray, list[Fraction]]:
    g = _gcd_all(v)
    if v[pivot] < 0:
        g = -g
    if g != 1:
        v = v // g
        combo = [c / g for c in combo]
    return v, combo


class EchelonSpan:
    """Reduced row-echelon basis of a subspace of Q^m.

    Rows are kept as primitive integer vectors whose pivot entry is
    positive; dividing a row by its pivot gives the usual RREF row.  Each
    row also remembers its expression in terms of the vectors inserted so
    far, so coordinates can be reported against the inserted family.
    """

    __slots__ = ("dimension", "pivots", "_rows", "_combos", "count")

    def __init__(self, dimension: int):
        self.dimension = dimension
        self.pivots: tuple[int, ...] = ()
        self._rows: tuple[np.ndarray, ...] = ()
        self._combos: tuple[tuple[Fraction, ...], ...] = ()
        self.count = 0  # number of vectors inserted, equals len(pivots)

    def __len__(self) -> int:
        return len(self.pivots)

    @property
    def rows(self) -> list[list[Fraction]]:
        """RREF rows (pivot entries equal to 1)."""
        return [[Fraction(int(x), int(r[p])) for x in r] for r, p in zip(self._rows, self.pivots)]

    def _vector(self, m) -> tuple[np.ndarray, int]:
        if isinstance(m, RationalMatrix):
            v, den = m.flat()
        else:
            fr = [Fraction(x) for x in m]
            den = reduce(lambda a, b: a * b // math.gcd(a, b), (x.denominator for x in fr), 1)
            v = np.array([x.numerator * (den // x.denominator) for x in fr], dtype=object)
        if v.shape[0] != self.dimension:
            raise DimensionError(f"vector of length {v.shape[0]} in span of dimension {self.dimension}")
        return np.array(v, dtype=object), den

    def _reduce(self, v: np.ndarray, combo: list[Fraction], combos=None) -> tuple[np.ndarray, list[Fraction]]:
        # rows are in RREF so eliminating one pivot never disturbs another
        for row, rc, p in zip(self._rows, combos if combos is not None else self._combos, self.pivots):
            c = v[p]
            if c:
                rp = row[p]
                v = v * rp - row * c
                combo = [x * rp - y * c for x, y in zip(combo, rc)]
        return v, combo

    def contains(self, m) -> bool:
        v, _ = self._vector(m)
        v, _ = self._reduce(v, [Fraction(0)] * self.count)
        return not np.any(v)

    def insert(self, m) -> tuple["EchelonSpan", bool]:
        v, den = self._vector(m)
        combo = [Fraction(0)] * self.count + [Fraction(den)]
        rows = list(self._rows)
        combos = [list(c) + [Fraction(0)] for c in self._combos]
        pivots = list(self.pivots)
        v, combo = self._reduce(v, combo, combos)
        nz = np.nonzero(v)[0]
        if nz.size == 0:
            return self, False
        p = int(nz[0])
        v, combo = _primitive(v, combo, p)
        vp = v[p]
        for k, (row, rc) in enumerate(zip(rows, combos)):
            c = row[p]
            if c:
                new = row * vp - v * c
                newc = [x * vp - y * c for x, y in zip(rc, combo)]
                rows[k], combos[k] = _primitive(new, newc, pivots[k])
        at = 0
        while at < len(pivots) and pivots[at] < p:
            at += 1
        rows.insert(at, v)
        combos.insert(at, combo)
        pivots.insert(at, p)
        out = EchelonSpan(self.dimension)
        for r in rows:
            r.flags.writeable = False
        out._rows = tuple(rows)
        out._combos = tuple(tuple(c) for c in combos)
        out.pivots = tuple(pivots)
        out.count = self.count + 1
        return out, True

    def solve(self, target) -> list[Fraction] | None:
        """Coordinates of ``target`` against the inserted vectors, or None."""
        v, den = self._vector(target)
        r, _ = self._reduce(v.copy(), [Fraction(0)] * self.count)
        if np.any(r):
            return None
        coords = [Fraction(0)] * self.count
        for row, rc, p in zip(self._rows, self._combos, self.pivots):
            # RREF coordinate of target is its entry at the pivot
            t = Fraction(int(v[p]), den * int(row[p]))
            if t:
                for k, x in enumerate(rc):
                    if x:
                        coords[k] += t * x
        return coords


def span_insert(s: EchelonSpan, m) -> tuple[EchelonSpan, bool]:
    return s.insert(m)


def solve_in_span(s: EchelonSpan, target) -> list[Fraction] | None:
    return s.solve(target)


def combine(coeffs: Sequence, mats: Sequence[RationalMatrix]) -> RationalMatrix:
    """Exact linear combination ``sum(c * m)``."""
    if not mats:
        raise DimensionError("empty combination")
    acc = RationalMatrix.zeros(*mats[0].shape)
    for c, m in zip(coeffs, mats):
        if c:
            acc = acc + m.scale(c)
    return acc
