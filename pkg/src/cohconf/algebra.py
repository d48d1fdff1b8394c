"""Adjacency algebras as explicit monomial bases, and polynomial relations
between the generators."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .linalg import EchelonSpan, RationalMatrix, combine, mat_mul, rank

Word = tuple[int, ...]


class AlgebraError(ValueError):
    pass


class DimensionCapExceeded(AlgebraError):
    def __init__(self, cap: int, reached: int):
        super().__init__(f"algebra dimension exceeds cap {cap} (reached {reached})")
        self.cap = cap
        self.reached = reached


@dataclass
class AlgebraBasis:
    generators: tuple[RationalMatrix, ...]
    words: tuple[Word, ...]
    matrices: tuple[RationalMatrix, ...]
    span: EchelonSpan
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __len__(self) -> int:
        return len(self.words)

    @property
    def dim(self) -> int:
        return len(self.words)

    @property
    def size(self) -> int:
        return self.generators[0].rows

    @property
    def basis(self) -> list[tuple[Word, RationalMatrix]]:
        return list(zip(self.words, self.matrices))

    def word_matrix(self, word: Sequence[int]) -> RationalMatrix:
        """Matrix of ``T_{w1} T_{w2} ... T_{wk}``."""
        word = tuple(word)
        if word in self._cache:
            return self._cache[word]
        if not word:
            m = RationalMatrix.identity(self.size)
        else:
            c = word[-1]
            if not 1 <= c <= len(self.generators):
                raise AlgebraError(f"generator index {c} out of range")
            m = mat_mul(self.word_matrix(word[:-1]), self.generators[c - 1])
        self._cache[word] = m
        return m

    def coordinates(self, m: RationalMatrix) -> list[Fraction] | None:
        return self.span.solve(m)

    def contains(self, m: RationalMatrix) -> bool:
        return self.span.contains(m)

    def element(self, coords: Sequence) -> RationalMatrix:
        return combine(coords, self.matrices)


def _sorted_words(words: Iterable[Word]) -> list[Word]:
    return sorted(words, key=lambda w: (len(w), w))


def algebra_closure(generators: Sequence[RationalMatrix], dim_cap: int | None = None) -> AlgebraBasis:
    """Monomial basis of the algebra generated by ``generators``.

    Words are visited by length, then lexicographically; a word joins the
    basis when its matrix is independent of everything before it.
    """
    gens = tuple(generators)
    if not gens:
        raise AlgebraError("need at least one generator")
    n = gens[0].rows
    if any(g.shape != (n, n) for g in gens):
        raise AlgebraError("generators must be square of the same size")
    if dim_cap is None:
        dim_cap = n
    if dim_cap < 1:
        raise AlgebraError("dim_cap must be at least 1")
    ab = AlgebraBasis(gens, (), (), EchelonSpan(n * n))
    words: list[Word] = []
    mats: list[RationalMatrix] = []
    span = EchelonSpan(n * n)
    frontier: list[Word] = [()]
    while frontier:
        added = []
        for w in frontier:
            m = ab.word_matrix(w)
            span, new = span.insert(m)
            if new:
                words.append(w)
                mats.append(m)
                added.append(w)
                if len(words) > dim_cap:
                    raise DimensionCapExceeded(dim_cap, len(words))
        frontier = _sorted_words(w + (c,) for w in added for c in range(1, len(gens) + 1))
    ab.words, ab.matrices, ab.span = tuple(words), tuple(mats), span
    return ab


def closure_certificate(ab: AlgebraBasis) -> bool:
    """Every basis element times every generator stays in the span."""
    return all(ab.span.contains(mat_mul(b, t)) for b in ab.matrices for t in ab.generators)


def is_transpose_closed(ab: AlgebraBasis) -> bool:
    return all(ab.span.contains(b.T) for b in ab.matrices)


def is_commutative(ab: AlgebraBasis) -> bool:
    return all(mat_mul(a, b) == mat_mul(b, a) for i, a in enumerate(ab.matrices) for b in ab.matrices[i + 1:])


# relations

@dataclass(frozen=True)
class RelationPolynomial:
    """``sum(coeff * word)``; a relation holds when this evaluates to zero."""

    terms: tuple[tuple[Fraction, Word], ...]

    @classmethod
    def from_terms(cls, terms: Iterable[tuple]) -> "RelationPolynomial":
        acc: dict[Word, Fraction] = {}
        for c, w in terms:
            w = tuple(w)
            acc[w] = acc.get(w, Fraction(0)) + Fraction(c)
        return cls(tuple((c, w) for w, c in sorted(acc.items(), key=lambda t: (len(t[0]), t[0])) if c))

    def __sub__(self, other: "RelationPolynomial") -> "RelationPolynomial":
        return RelationPolynomial.from_terms(list(self.terms) + [(-c, w) for c, w in other.terms])

    def __add__(self, other: "RelationPolynomial") -> "RelationPolynomial":
        return RelationPolynomial.from_terms(list(self.terms) + list(other.terms))

    def __mul__(self, other: "RelationPolynomial") -> "RelationPolynomial":
        return RelationPolynomial.from_terms((a * b, u + v) for a, u in self.terms for b, v in other.terms)

    def reversed(self) -> "RelationPolynomial":
        """Transpose partner: every word read backwards."""
        return RelationPolynomial.from_terms((c, w[::-1]) for c, w in self.terms)

    def normalized(self) -> "RelationPolynomial":
        if not self.terms:
            return self
        lead = self.terms[-1][0]
        return RelationPolynomial.from_terms((c / lead, w) for c, w in self.terms)

    def __str__(self) -> str:
        return render_terms([(c, w) for c, w in self.terms])


def poly(*terms) -> RelationPolynomial:
    return RelationPolynomial.from_terms(terms)


def gen(i: int) -> RelationPolynomial:
    return poly((1, (i,)))


def scalar(c) -> RelationPolynomial:
    return poly((c, ()))


def word(*letters: int) -> RelationPolynomial:
    return poly((1, tuple(letters)))


def evaluate(ab: AlgebraBasis, rel: RelationPolynomial) -> RationalMatrix:
    acc = RationalMatrix.zeros(ab.size)
    for c, w in rel.terms:
        acc = acc + ab.word_matrix(w).scale(c)
    return acc


def check_relation(ab: AlgebraBasis, rel: RelationPolynomial) -> bool:
    return evaluate(ab, rel).is_zero()


def quadratic(i: int, q) -> RelationPolynomial:
    """``(T_i - q)(T_i + 1)``."""
    return (gen(i) - scalar(q)) * (gen(i) + scalar(1))


def _alternating(i: int, j: int, length: int) -> Word:
    return tuple(i if k % 2 == 0 else j for k in range(length))


def _with_transposes(base: Sequence[RelationPolynomial]) -> list[RelationPolynomial]:
    out: list[RelationPolynomial] = []
    seen: set = set()
    for rel in base:
        for r in (rel, rel.reversed()):
            key = r.normalized()
            if key not in seen:
                seen.add(key)
                out.append(r)
    return out


def presentation(kind: str, **params) -> list[RelationPolynomial]:
    """Defining relations for a named family.

    ``hecke`` takes ``coxeter`` (symmetric matrix of ``m_ij``) and ``q`` (one
    order per generator, or a single number); ``aff`` and ``circle`` take
    ``q``; ``petersen`` takes nothing.  Transpose partners are included.
    """
    if kind == "hecke":
        m = [list(r) for r in params["coxeter"]]
        n = len(m)
        if any(len(r) != n for r in m):
            raise AlgebraError("Coxeter matrix must be square")
        for i in range(n):
            if m[i][i] != 1:
                raise AlgebraError("Coxeter matrix needs 1 on the diagonal")
            for j in range(n):
                if m[i][j] != m[j][i]:
                    raise AlgebraError("Coxeter matrix must be symmetric")
                if i != j and not m[i][j] >= 2:
                    raise AlgebraError("off-diagonal Coxeter entries must be at least 2")
        qs = params["q"]
        qs = list(qs) if isinstance(qs, (list, tuple)) else [qs] * n
        base = [quadratic(i + 1, qs[i]) for i in range(n)]
        for i in range(n):
            for j in range(i + 1, n):
                l = m[i][j]
                base.append(poly((1, _alternating(i + 1, j + 1, l)), (-1, _alternating(j + 1, i + 1, l))))
        return _with_transposes(base)
    if kind == "aff":
        q = Fraction(params["q"])
        base = [
            quadratic(1, q - 1),
            quadratic(2, q),
            word(1, 2, 1, 2) - poly((q - 1, (2, 1)), (q - 1, (2, 1, 2)), (-1, (1, 2, 1))),
        ]
        return _with_transposes(base)
    if kind == "circle":
        q = Fraction(params["q"])
        base = [
            quadratic(1, 1),
            quadratic(2, q),
            word(2, 1, 2, 1) - poly((1, (1, 2)), (1, (2, 1, 2)), (-1, (1, 2, 1))),
        ]
        return _with_transposes(base)
    if kind == "petersen":
        base = [
            quadratic(1, 1),
            quadratic(2, 2),
            word(1, 2, 1, 2, 1, 2) - word(2, 1, 2, 1) * (scalar(1) + gen(2)) + word(1, 2, 1, 2, 1),
        ]
        return _with_transposes(base)
    raise AlgebraError(f"unknown presentation {kind!r}")


A2 = ((1, 3), (3, 1))


def gram_semisimplicity(ab: AlgebraBasis) -> bool:
    """Nondegeneracy of the trace form ``Tr(B_i B_j)`` on the basis."""
    k = len(ab)
    gram = [[None] * k for _ in range(k)]
    for i, a in enumerate(ab.matrices):
        for j in range(i, k):
            b = ab.matrices[j]
            # Tr(AB) = sum_{x,y} A[x,y] B[y,x]
            t = np.sum(a.numerator.astype(object) * b.numerator.T.astype(object))
            gram[i][j] = gram[j][i] = Fraction(int(t), a.denominator * b.denominator)
    return rank(RationalMatrix.from_rows(gram)) == k


# rendering and parsing

def format_word(w: Word) -> str:
    return "".join(f"T{c}" for c in w) if w else "I"


def _format_coeff(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def render_terms(terms: Sequence[tuple[Fraction, Word]]) -> str:
    """Positive terms first, each group in the given order."""
    terms = [(Fraction(c), w) for c, w in terms if c]
    if not terms:
        return "0"
    order = sorted(range(len(terms)), key=lambda k: (terms[k][0] < 0, k))
    parts = []
    for pos, k in enumerate(order):
        c, w = terms[k]
        mag = abs(c)
        if mag == 1:
            body = format_word(w)
        else:
            body = f"{_format_coeff(mag)}*{format_word(w)}"
        if pos == 0:
            parts.append(("-" if c < 0 else "") + body)
        else:
            parts.append(("- " if c < 0 else "+ ") + body)
    return " ".join(parts)


def pretty_word_combination(ab: AlgebraBasis, coords: Sequence) -> str:
    if len(coords) != len(ab):
        raise AlgebraError(f"expected {len(ab)} coordinates, got {len(coords)}")
    return render_terms(list(zip(coords, ab.words)))


_TERM = re.compile(r"^(?:(?P<coef>\d+(?:/\d+)?)\*?)?(?P<word>(?:T\d+)+|I)?$")


def parse_polynomial(text: str) -> RelationPolynomial:
    """Parse e.g. ``T1T2T1 - T2T1T2`` or ``2*T1 + 1/2*I - 3``.

    ``I`` or a bare number denotes the identity word.  ``lhs = rhs`` is
    read as ``lhs - rhs``.
    """
    if "=" in text:
        lhs, rhs = text.split("=", 1)
        return parse_polynomial(lhs) - parse_polynomial(rhs)
    s = text.replace(" ", "")
    if not s:
        raise AlgebraError("empty polynomial")
    if s[0] not in "+-":
        s = "+" + s
    terms = []
    for sign, body in re.findall(r"([+-])([^+-]+)", s):
        m = _TERM.match(body)
        if not m or not (m.group("coef") or m.group("word")):
            raise AlgebraError(f"cannot parse term {body!r}")
        c = Fraction(m.group("coef")) if m.group("coef") else Fraction(1)
        w = m.group("word")
        letters = () if w in (None, "I") else tuple(int(x) for x in re.findall(r"T(\d+)", w))
        terms.append((c if sign == "+" else -c, letters))
    if "".join(sign + body for sign, body in re.findall(r"([+-])([^+-]+)", s)) != s:
        raise AlgebraError(f"cannot parse {text!r}")
    return RelationPolynomial.from_terms(terms)


def parse_relations(text: str) -> list[RelationPolynomial]:
    out = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            out.append(parse_polynomial(line))
        except AlgebraError as exc:
            raise AlgebraError(f"line {lineno}: {exc}") from None
    return out
