"""Independent reference implementations used only by tests.

Everything here recomputes results from first principles (schoolbook
convolution, direct nested loops over integer variables) so the fast paths
in the package are checked against a second, dumber route.
"""

from __future__ import annotations

from thetasums.polygonal import PolygonalSum
from thetasums.series import Series


def schoolbook_mul(a: Series, b: Series) -> Series:
    """Quadratic-time convolution over every index pair."""
    order = min(a.order, b.order)
    out = [0] * order
    for i in range(order):
        ai = a[i]
        for j in range(order - i):
            out[i + j] += ai * b[j]
    return Series(out, order)


def term_values_sorted(term, bound: int, with_multiplicity: bool) -> list[int]:
    """Values of c*x(ax+b)/2 up to bound by direct x iteration."""
    vals = []
    x = 0
    while True:
        v = term.coeff * (x * (term.a * x + term.b)) // 2
        if v > bound:
            break
        vals.append(v)
        x += 1
    x = -1
    while True:
        v = term.coeff * (x * (term.a * x + term.b)) // 2
        if v > bound:
            break
        vals.append(v)
        x -= 1
    if not with_multiplicity:
        vals = list(set(vals))
    vals.sort()
    return vals


def brute_counts(s: PolygonalSum, bound: int) -> list[int]:
    """Representation counts by nested loops over every variable."""
    per_term = [term_values_sorted(t, bound, with_multiplicity=True) for t in s.terms]
    counts = [0] * (bound + 1)

    def rec(i: int, partial: int):
        vals = per_term[i]
        if i == len(per_term) - 1:
            for v in vals:
                total = partial + v
                if total > bound:
                    break
                counts[total] += 1
            return
        for v in vals:
            total = partial + v
            if total > bound:
                break
            rec(i + 1, total)

    rec(0, 0)
    return counts


def brute_missing(s: PolygonalSum, bound: int) -> list[int]:
    """Non-represented integers <= bound by nested loops over value sets."""
    per_term = [term_values_sorted(t, bound, with_multiplicity=False) for t in s.terms]
    reached = bytearray(bound + 1)

    def rec(i: int, partial: int):
        vals = per_term[i]
        if i == len(per_term) - 1:
            for v in vals:
                total = partial + v
                if total > bound:
                    break
                reached[total] = 1
            return
        for v in vals:
            total = partial + v
            if total > bound:
                break
            rec(i + 1, total)

    rec(0, 0)
    return [n for n in range(bound + 1) if not reached[n]]
