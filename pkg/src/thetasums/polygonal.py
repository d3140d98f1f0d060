"""Generalized polygonal numbers, finite polygonal sums, and certification.

A QuadTerm is one summand c*x(Ax+B)/2 with x ranging over all integers; a
PolygonalSum is a finite list of them.  Certification of universality is
bounded and sieve-based: value sets become bitmasks (Python ints) and the
sumset of two masks is an OR of shifts, so only positivity is ever
computed unless representation counts are asked for explicitly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from math import gcd

from .series import Series


@dataclass(frozen=True, order=True)
class QuadTerm:
    """Value family { coeff * x(a*x + b)/2 : x in Z }.

    b is normalized to b <= 0 (x <-> -x symmetry leaves the family fixed);
    a and b must share parity so values are integers, and |b| <= a so the
    family is nonnegative.
    """

    coeff: int
    a: int
    b: int

    def __post_init__(self):
        object.__setattr__(self, "b", -abs(self.b))
        if self.coeff < 1:
            raise ValueError("term coefficient must be >= 1")
        if self.a < 1:
            raise ValueError("leading parameter must be >= 1")
        if (self.a - self.b) % 2 != 0:
            raise ValueError(f"parity violation: {self.a} and {self.b} differ mod 2")
        if -self.b > self.a:
            raise ValueError("|b| > a would produce negative values")

    def value(self, x: int) -> int:
        return self.coeff * (x * (self.a * x + self.b)) // 2

    def values_upto(self, bound: int, nonneg: bool = False) -> list[int]:
        """All family values <= bound, in evaluation order (may repeat)."""
        out = []
        x = 0
        while True:
            v = self.value(x)
            if v > bound:
                break
            out.append(v)
            x += 1
        if not nonneg:
            x = -1
            while True:
                v = self.value(x)
                if v > bound:
                    break
                out.append(v)
                x -= 1
        return out


@dataclass(frozen=True)
class PolygonalSum:
    """Finite formal sum of QuadTerms."""

    terms: tuple[QuadTerm, ...]

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(self.terms))
        if not self.terms:
            raise ValueError("a polygonal sum needs at least one term")

    def __len__(self) -> int:
        return len(self.terms)


@dataclass(frozen=True)
class UniversalityVerdict:
    """Bounded certification result; missing lists every gap <= bound."""

    bound: int
    missing: tuple[int, ...] = field(default=())

    @property
    def universal(self) -> bool:
        return not self.missing


def polygonal_value(m: int, x: int) -> int:
    """The generalized m-gonal number ((m-2)x^2 - (m-4)x)/2."""
    if m < 3:
        raise ValueError("polygonal order must be >= 3")
    return ((m - 2) * x * x - (m - 4) * x) // 2


def term_from_polygonal(coeff: int, m: int) -> QuadTerm:
    """coeff * p_m as a QuadTerm (a = m-2, b normalized from -(m-4))."""
    if m < 3:
        raise ValueError("polygonal order must be >= 3")
    return QuadTerm(coeff, m - 2, -(m - 4))


def sum_from_polygonals(parts: list[tuple[int, int]]) -> PolygonalSum:
    """Build a sum from (coeff, m) pairs."""
    return PolygonalSum(tuple(term_from_polygonal(c, m) for c, m in parts))


def term_series(term: QuadTerm, order: int) -> Series:
    """Coefficient at e counts the x in Z with term.value(x) == e, e < order."""
    coeffs = [0] * order
    for v in term.values_upto(order - 1):
        coeffs[v] += 1
    return Series(coeffs, order)


def representation_series(s: PolygonalSum, bound: int) -> Series:
    """Exact representation counts of 0..bound (series order bound+1)."""
    order = bound + 1
    result = term_series(s.terms[0], order)
    for t in s.terms[1:]:
        result = result.mul(term_series(t, order))
    return result


@lru_cache(maxsize=4096)
def _term_mask(term: QuadTerm, bound: int, nonneg: bool) -> int:
    mask = 0
    for v in term.values_upto(bound, nonneg):
        mask |= 1 << v
    return mask


@lru_cache(maxsize=4096)
def sum_value_mask(s: PolygonalSum, bound: int, nonneg: bool = False) -> int:
    """Bitmask of representable integers in [0, bound].

    Sumsets are folded in by shifting the accumulated mask by each raw
    value of the next term; once the mask is full it stays full because
    every term reaches 0.
    """
    full = (1 << (bound + 1)) - 1
    acc = _term_mask(s.terms[0], bound, nonneg)
    for t in s.terms[1:]:
        if acc == full:
            return full
        shifted = 0
        for v in t.values_upto(bound, nonneg):
            shifted |= acc << v
        acc = shifted & full
    return acc


def _mask_bits(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


@lru_cache(maxsize=4096)
def certify_universal(s: PolygonalSum, bound: int, nonneg: bool = False) -> UniversalityVerdict:
    """Sieve every integer in [0, bound]; missing is the sorted gap list."""
    if bound < 1:
        raise ValueError("bound must be >= 1")
    full = (1 << (bound + 1)) - 1
    gaps = full & ~sum_value_mask(s, bound, nonneg)
    return UniversalityVerdict(bound, tuple(_mask_bits(gaps)))


def equivalent_upto(
    s1: PolygonalSum, s2: PolygonalSum, bound: int
) -> tuple[bool, int | None]:
    """Set equality of the two value sets within [0, bound].

    Returns (True, None) or (False, w) with w the least witness present in
    exactly one of the sets.
    """
    diff = sum_value_mask(s1, bound) ^ sum_value_mask(s2, bound)
    if diff == 0:
        return True, None
    return False, (diff & -diff).bit_length() - 1


def rescale_equivalence(a: int, b: int) -> tuple[PolygonalSum, PolygonalSum]:
    """The rescaling pair h(ah+b) + l(al+a-b)  ~  a*p3(h) + l(al+a-2b)/2.

    Valid for a >= 1 and 0 <= b <= a/2; both sides are returned as
    PolygonalSums for downstream equivalence checking.
    """
    if a < 1 or b < 0 or 2 * b > a:
        raise ValueError("need a >= 1 and 0 <= b <= a/2")
    lhs = PolygonalSum((QuadTerm(1, 2 * a, 2 * b), QuadTerm(1, 2 * a, 2 * (a - b))))
    rhs = PolygonalSum((term_from_polygonal(a, 3), QuadTerm(1, a, a - 2 * b)))
    return lhs, rhs


def reduce_term(term: QuadTerm) -> QuadTerm:
    """Extract the largest integer content from (a, b), keeping parity.

    The result generates the same values pointwise: c*g*x(A'x+B')/2 with
    A' = a/g, B' = b/g equals c*x(ax+b)/2 for every x.
    """
    c, a, b = term.coeff, term.a, term.b
    if b == 0:
        # c*(a/2)*x^2; a is even by the parity invariant.
        return QuadTerm(c * a // 2, 2, 0)
    g0 = gcd(a, -b)
    for g in range(g0, 0, -1):
        if g0 % g == 0 and ((a // g) - (b // g)) % 2 == 0:
            return QuadTerm(c * g, a // g, b // g)
    return term  # unreachable: g == 1 always satisfies the parity test


def family_key(term: QuadTerm) -> tuple[int, int, int]:
    """Canonical (a, |b|, coeff) of the reduced term, used for matching.

    The hexagonal shape (4, 2) is identified with the triangular shape
    (1, 1): the two value sets coincide, which is how sums written with
    p3 match terms arising from psi-type atoms.
    """
    r = reduce_term(term)
    a, bb = r.a, -r.b
    if (a, bb) == (4, 2):
        a, bb = 1, 1
    return (a, bb, r.coeff)


def sum_families(s: PolygonalSum) -> tuple[tuple[int, int, int], ...]:
    """Sorted family keys; two sums match iff these tuples are equal."""
    return tuple(sorted(family_key(t) for t in s.terms))


def polygonal_order_of(term: QuadTerm) -> int | None:
    """m such that the reduced term is coeff' * p_m, if any."""
    r = reduce_term(term)
    a, bb = r.a, -r.b
    if (a, bb) == (4, 2):
        a, bb = 1, 1
    m = a + 2
    if bb == abs(m - 4):
        return m
    return None


def term_label(term: QuadTerm) -> str:
    """Human-readable label: 'c*pm' when the shape is m-gonal."""
    r = reduce_term(term)
    a, bb = r.a, -r.b
    if (a, bb) == (4, 2):
        r = QuadTerm(r.coeff, 1, -1)
        a, bb = 1, 1
    m = a + 2
    if bb == abs(m - 4):
        return f"p{m}" if r.coeff == 1 else f"{r.coeff}*p{m}"
    body = f"x({a}x{'+' if r.b >= 0 else '-'}{abs(r.b)})/2"
    return body if r.coeff == 1 else f"{r.coeff}*{body}"


def sum_label(s: PolygonalSum) -> str:
    """Label with terms sorted the way the value lists are usually quoted."""

    def sort_key(t: QuadTerm):
        m = polygonal_order_of(t)
        r = reduce_term(t)
        return (0, m, r.coeff) if m is not None else (1, r.a, -r.b, r.coeff)

    return " + ".join(term_label(t) for t in sorted(s.terms, key=sort_key))
