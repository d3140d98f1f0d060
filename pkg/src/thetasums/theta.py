"""Symbolic two-parameter theta atoms and weighted sums of their products.

An atom (i, j) stands for the series sum over all integers n of
q^(i*n(n+1)/2 + j*n(n-1)/2), the formal two-parameter theta function with
arguments q^i, q^j.  The named shapes are

    phi(q^n) = (n, n)      exponents n*x^2
    psi(q^n) = (n, 3n)     exponents n*x(2x-1)  (triangular values)
    X(q^n)   = (n, 2n)     exponents n*x(3x-1)/2  (generalized pentagonal)
    Y(q^n)   = (n, 5n)     exponents n*x(3x-2)  (generalized octagonal)

Expressions are formal integer-weighted sums of q-power-shifted products
of atoms; they evaluate exactly into Series.  The two rewriting rules used
throughout are symmetry (i, j) = (j, i) and the unit-argument doubling
(0, j) -> 2 * (j, 3j).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .series import Series


class ThetaError(ValueError):
    """Structural misuse of a theta atom or expression."""


class UnsupportedDissection(ThetaError):
    """Dissection would produce a negative atom exponent."""


class UnsupportedSplit(ThetaError):
    """Product split would produce a negative atom exponent."""


@dataclass(frozen=True, order=True)
class ThetaAtom:
    """One theta factor with exponent pair (i, j); denotes f(q^i, q^j)."""

    i: int
    j: int

    def __post_init__(self):
        if self.i < 0 or self.j < 0:
            raise ThetaError(f"negative atom exponent in ({self.i}, {self.j})")
        if self.i + self.j < 1:
            raise ThetaError("atom (0, 0) is not a theta function")

    @classmethod
    def phi(cls, n: int = 1) -> ThetaAtom:
        return cls(n, n)

    @classmethod
    def psi(cls, n: int = 1) -> ThetaAtom:
        return cls(n, 3 * n)

    @classmethod
    def x(cls, n: int = 1) -> ThetaAtom:
        return cls(n, 2 * n)

    @classmethod
    def y(cls, n: int = 1) -> ThetaAtom:
        return cls(n, 5 * n)

    @property
    def is_canonical(self) -> bool:
        return 1 <= self.i <= self.j


@dataclass(frozen=True)
class ProductTerm:
    """multiplier * q^shift * product of atoms."""

    multiplier: int
    shift: int
    atoms: tuple[ThetaAtom, ...]

    def __post_init__(self):
        if self.multiplier < 1:
            raise ThetaError("term multiplier must be >= 1")
        if self.shift < 0:
            raise ThetaError("term shift must be nonnegative")
        if not self.atoms:
            raise ThetaError("term needs at least one atom")
        object.__setattr__(self, "atoms", tuple(self.atoms))


@dataclass(frozen=True)
class ThetaExpression:
    """Formal sum of product terms; the empty sum is zero."""

    terms: tuple[ProductTerm, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(self.terms))

    def series(self, order: int) -> Series:
        return expression_series(self, order)


def canonicalize(term: ProductTerm) -> ProductTerm:
    """Rewrite every atom to canonical form 1 <= i <= j and sort the list.

    Symmetry lets (i, j) with i > j swap; an atom with a zero exponent is
    the unit-argument case and rewrites to (j, 3j) while doubling the term
    multiplier.  Idempotent on canonical terms.
    """
    mult = term.multiplier
    atoms = []
    for a in term.atoms:
        i, j = a.i, a.j
        if i > j:
            i, j = j, i
        if i == 0:
            mult *= 2
            i, j = j, 3 * j
        atoms.append(ThetaAtom(i, j))
    atoms.sort()
    return ProductTerm(mult, term.shift, tuple(atoms))


@lru_cache(maxsize=4096)
def _atom_series(i: int, j: int, order: int) -> Series:
    coeffs = [0] * order
    # n >= 0 branch: exponent i*n(n+1)/2 + j*n(n-1)/2 is nondecreasing.
    n = 0
    while True:
        e = (i * n * (n + 1) + j * n * (n - 1)) // 2
        if e >= order:
            break
        coeffs[e] += 1
        n += 1
    # n <= -1 branch, strictly increasing as n decreases.
    n = -1
    while True:
        e = (i * n * (n + 1) + j * n * (n - 1)) // 2
        if e >= order:
            break
        coeffs[e] += 1
        n -= 1
    return Series._wrap(coeffs)


def atom_series(atom: ThetaAtom, order: int) -> Series:
    """Exact expansion of the atom, truncated at order."""
    if order < 1:
        raise ValueError("order must be positive")
    return _atom_series(atom.i, atom.j, order)


@lru_cache(maxsize=4096)
def _product_series_cached(atoms: tuple[ThetaAtom, ...], order: int) -> Series:
    result = _atom_series(atoms[0].i, atoms[0].j, order)
    for a in atoms[1:]:
        result = result.mul(_atom_series(a.i, a.j, order))
    return result


def product_series(atoms: tuple[ThetaAtom, ...], order: int) -> Series:
    """Expansion of a plain product of atoms (no shift, no multiplier)."""
    return _product_series_cached(tuple(sorted(atoms)), order)


def term_series(term: ProductTerm, order: int) -> Series:
    if term.shift >= order:
        return Series.zero(order)
    body = product_series(term.atoms, order - term.shift)
    coeffs = [0] * term.shift + [term.multiplier * c for c in body.coeffs]
    return Series(coeffs, order)


def expression_series(expr: ThetaExpression, order: int) -> Series:
    """Exact expansion of the full formal sum."""
    total = Series.zero(order)
    for term in expr.terms:
        total = total.add(term_series(term, order))
    return total


def _tri(n: int) -> int:
    return n * (n + 1) // 2


def dissect(atom: ThetaAtom, n: int) -> ThetaExpression:
    """Split an atom by residue classes of the exponent mod a derived step.

    Term r (0 <= r < n) carries shift i*r(r+1)/2 + j*r(r-1)/2 and a single
    atom whose exponents come from the quotient structure of the two-sided
    series; the returned expression expands to the same Series as the
    input atom at every order.  Raises UnsupportedDissection when a derived
    exponent would be negative (for canonical atoms that happens for every
    n >= 3; only n = 2 splits mechanically).
    """
    if n < 2:
        raise ValueError("dissection needs n >= 2")
    i, j = atom.i, atom.j
    terms = []
    for r in range(n):
        shift = i * _tri(r) + j * _tri(r - 1)
        first = i * (_tri(n + r) - _tri(r)) + j * (_tri(n + r - 1) - _tri(r - 1))
        second = i * (_tri(n - r - 1) - _tri(r)) + j * (_tri(n - r) - _tri(r - 1))
        if first < 0 or second < 0:
            raise UnsupportedDissection(
                f"dissection of ({i}, {j}) by {n} hits a negative exponent at r={r}"
            )
        terms.append(canonicalize(ProductTerm(1, shift, (ThetaAtom(first, second),))))
    return ThetaExpression(tuple(terms))


def product_split(a1: ThetaAtom, a2: ThetaAtom) -> ThetaExpression:
    """Split a product of two atoms with equal exponent sums into two terms.

    Requires i1 + j1 == i2 + j2 (the condition that both atoms share the
    same base q^(i+j)).  The result expands to atom_series(a1) times
    atom_series(a2) at every order.  Raises UnsupportedSplit when a
    derived exponent would be negative; argument order matters, so callers
    may need to swap the factors.
    """
    i1, j1, i2, j2 = a1.i, a1.j, a2.i, a2.j
    if i1 + j1 != i2 + j2:
        raise ThetaError(
            f"split requires matching exponent sums, got {i1 + j1} and {i2 + j2}"
        )
    t1 = ProductTerm(1, 0, (ThetaAtom(i1 + i2, j1 + j2), ThetaAtom(i1 + j2, j1 + i2)))
    u1, u2 = j1 - i2, j1 - j2
    if u1 < 0 or u2 < 0:
        raise UnsupportedSplit(
            f"split of ({i1},{j1}) * ({i2},{j2}) hits a negative exponent"
        )
    t2 = ProductTerm(
        1,
        i1,
        (ThetaAtom(u1, i1 + 2 * i2 + j2), ThetaAtom(u2, i1 + i2 + 2 * j2)),
    )
    return ThetaExpression((canonicalize(t1), canonicalize(t2)))
