"""Exact truncated power series in q over the integers.

Every other module evaluates against this substrate.  A Series stores one
coefficient per exponent 0..order-1 and carries no meaning beyond that;
binary operations truncate to the smaller order so stale high coefficients
never propagate.  Coefficients are Python ints, so arithmetic is exact at
any magnitude (overflow cannot occur silently).
"""

from __future__ import annotations


class Series:
    """Immutable truncated power series with exact integer coefficients."""

    __slots__ = ("_coeffs", "order")

    def __init__(self, coeffs, order: int | None = None):
        coeffs = [int(c) for c in coeffs]
        if order is None:
            order = len(coeffs)
        if order < 1:
            raise ValueError("series order must be positive")
        if len(coeffs) < order:
            coeffs.extend([0] * (order - len(coeffs)))
        elif len(coeffs) > order:
            del coeffs[order:]
        self._coeffs = coeffs
        self.order = order

    @classmethod
    def _wrap(cls, coeffs: list[int]) -> Series:
        # Internal fast path: takes ownership of an already-built list.
        s = object.__new__(cls)
        s._coeffs = coeffs
        s.order = len(coeffs)
        return s

    @classmethod
    def zero(cls, order: int) -> Series:
        return cls._wrap([0] * _checked_order(order))

    @classmethod
    def one(cls, order: int) -> Series:
        coeffs = [0] * _checked_order(order)
        coeffs[0] = 1
        return cls._wrap(coeffs)

    @classmethod
    def monomial(cls, exponent: int, order: int, coeff: int = 1) -> Series:
        coeffs = [0] * _checked_order(order)
        if exponent < 0:
            raise ValueError("negative exponents are not representable")
        if exponent < order:
            coeffs[exponent] = int(coeff)
        return cls._wrap(coeffs)

    @property
    def coeffs(self) -> tuple[int, ...]:
        return tuple(self._coeffs)

    def __getitem__(self, e: int) -> int:
        return self._coeffs[e]

    def __len__(self) -> int:
        return self.order

    def nonzero(self) -> list[tuple[int, int]]:
        """(exponent, coefficient) pairs for the nonzero coefficients."""
        return [(e, c) for e, c in enumerate(self._coeffs) if c]

    def is_zero(self) -> bool:
        return not any(self._coeffs)

    def add(self, other: Series) -> Series:
        order = min(self.order, other.order)
        a, b = self._coeffs, other._coeffs
        return Series._wrap([a[e] + b[e] for e in range(order)])

    def sub(self, other: Series) -> Series:
        order = min(self.order, other.order)
        a, b = self._coeffs, other._coeffs
        return Series._wrap([a[e] - b[e] for e in range(order)])

    def scale(self, k: int) -> Series:
        k = int(k)
        return Series._wrap([k * c for c in self._coeffs])

    def mul(self, other: Series) -> Series:
        """Cauchy product truncated to the smaller order.

        Iterates nonzero terms only, outer loop over the sparser factor;
        theta factors have O(sqrt(order)) support so products stay cheap
        even though results become dense.
        """
        order = min(self.order, other.order)
        na = [(e, c) for e, c in enumerate(self._coeffs[:order]) if c]
        nb = [(e, c) for e, c in enumerate(other._coeffs[:order]) if c]
        if len(na) > len(nb):
            na, nb = nb, na
        out = [0] * order
        for ea, ca in na:
            limit = order - ea
            for eb, cb in nb:
                if eb >= limit:
                    break
                out[ea + eb] += ca * cb
        return Series._wrap(out)

    def shift(self, e: int) -> Series:
        """Multiply by q^e, keeping the original truncation order."""
        if e < 0:
            raise ValueError("shift must be nonnegative")
        if e == 0:
            return self
        if e >= self.order:
            return Series.zero(self.order)
        return Series._wrap([0] * e + self._coeffs[: self.order - e])

    def substitute(self, k: int) -> Series:
        """Replace q by q^k; the result keeps the input order."""
        if k < 1:
            raise ValueError("substitution power must be >= 1")
        if k == 1:
            return self
        out = [0] * self.order
        for e, c in enumerate(self._coeffs):
            if e * k >= self.order:
                break
            out[e * k] = c
        return Series._wrap(out)

    def equal_upto(self, other: Series, n: int) -> tuple[bool, tuple[int, int, int] | None]:
        """Compare coefficients for all exponents < n.

        Returns (True, None) on agreement, else (False, (e, left, right))
        for the least disagreeing exponent e.
        """
        if n > self.order or n > other.order:
            raise ValueError(f"comparison up to {n} exceeds a series order")
        a, b = self._coeffs, other._coeffs
        for e in range(n):
            if a[e] != b[e]:
                return False, (e, a[e], b[e])
        return True, None

    def __add__(self, other):
        if isinstance(other, Series):
            return self.add(other)
        return NotImplemented

    def __sub__(self, other):
        if isinstance(other, Series):
            return self.sub(other)
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, Series):
            return self.mul(other)
        if isinstance(other, int):
            return self.scale(other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        return NotImplemented

    def __eq__(self, other):
        if not isinstance(other, Series):
            return NotImplemented
        return self.order == other.order and self._coeffs == other._coeffs

    def __hash__(self):
        return hash((self.order, tuple(self._coeffs)))

    def __repr__(self):
        head = ", ".join(str(c) for c in self._coeffs[:8])
        tail = ", ..." if self.order > 8 else ""
        return f"Series([{head}{tail}], order={self.order})"


def _checked_order(order: int) -> int:
    if order < 1:
        raise ValueError("series order must be positive")
    return order
