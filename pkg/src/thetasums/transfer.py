"""Verified k-dissections of theta products and universality transfer.

A Decomposition rewrites a product of three or four atoms as a sum of
residue-class terms: term r carries shift r-1 and atoms whose exponents
are all multiples of the modulus k.  Once the series identity is checked,
each side maps mechanically to a polygonal sum (atom (i, j) becomes the
family x((i+j)x + i-j)/2, with the factor k divided out on the right), and
universality propagates both ways along the exponent map e = k*m + (r-1).
"""

from __future__ import annotations

from dataclasses import dataclass

from .polygonal import (
    PolygonalSum,
    QuadTerm,
    UniversalityVerdict,
    certify_universal,
    sum_families,
)
from .series import Series
from .theta import ProductTerm, ThetaAtom, product_series


class DecompositionError(ValueError):
    """Structural violation in a decomposition."""


@dataclass(frozen=True)
class Decomposition:
    """lhs = sum of rhs terms, separated by exponent residue mod modulus."""

    lhs: ProductTerm
    modulus: int
    rhs: tuple[ProductTerm, ...]

    def __post_init__(self):
        object.__setattr__(self, "rhs", tuple(self.rhs))
        self.validate()

    def validate(self) -> None:
        k = self.modulus
        if k < 2:
            raise DecompositionError("modulus must be >= 2")
        if self.lhs.multiplier != 1 or self.lhs.shift != 0:
            raise DecompositionError("lhs must be a bare product (multiplier 1, shift 0)")
        if len(self.lhs.atoms) not in (3, 4):
            raise DecompositionError("lhs must be a product of 3 or 4 atoms")
        if not self.rhs:
            raise DecompositionError("decomposition needs at least one rhs term")
        seen = set()
        for t in self.rhs:
            if len(t.atoms) != len(self.lhs.atoms):
                raise DecompositionError("rhs terms must match the lhs arity")
            if not 0 <= t.shift < k:
                raise DecompositionError(f"shift {t.shift} outside 0..{k - 1}")
            if t.shift in seen:
                raise DecompositionError(f"duplicate shift {t.shift}")
            seen.add(t.shift)
            for a in t.atoms:
                if a.i % k or a.j % k:
                    raise DecompositionError(
                        f"atom ({a.i}, {a.j}) exponents not divisible by {k}"
                    )


@dataclass(frozen=True)
class TransferRecord:
    """Polygonal sums read off a decomposition: one per side/residue term."""

    lhs_sum: PolygonalSum
    rhs_sums: tuple[PolygonalSum, ...]
    shifts: tuple[int, ...]
    modulus: int
    source: str = ""


@dataclass(frozen=True)
class VerifyOutcome:
    ok: bool
    exponent: int | None = None
    detail: str = ""


@dataclass(frozen=True)
class TransferOutcome:
    """Result of propagating universality through one record.

    status is 'propagated' when the lhs certification carries over to every
    rhs sum, 'refused' when the lhs itself is not certified, and
    'inconsistent' when the lhs passed but some rhs failed (which would
    falsify the decomposition or the bound).
    """

    status: str
    lhs_verdict: UniversalityVerdict
    rhs_results: tuple[tuple[PolygonalSum, int, UniversalityVerdict], ...]


def _descaled_atoms(term: ProductTerm, k: int) -> tuple[ThetaAtom, ...]:
    return tuple(ThetaAtom(a.i // k, a.j // k) for a in term.atoms)


def verify_decomposition(d: Decomposition, order: int) -> VerifyOutcome:
    """Exact check of the decomposition up to the given order.

    Three layers: the per-residue identity (lhs coefficient at k*m + shift
    equals multiplier times the descaled rhs product coefficient at m),
    vanishing of lhs coefficients on residues no rhs term covers, and full
    series equality of both sides.
    """
    k = d.modulus
    worst = max(t.shift for t in d.rhs)
    if worst >= order:
        return VerifyOutcome(False, None, f"insufficient order {order} for shift {worst}")
    lhs = product_series(d.lhs.atoms, order)
    assembled = [0] * order
    covered = set()
    for t in d.rhs:
        covered.add(t.shift)
        sub_order = (order - t.shift + k - 1) // k
        descaled = product_series(_descaled_atoms(t, k), sub_order)
        for m in range(sub_order):
            e = k * m + t.shift
            if e >= order:
                break
            rhs_c = t.multiplier * descaled[m]
            assembled[e] += rhs_c
            if lhs[e] != rhs_c:
                return VerifyOutcome(
                    False,
                    e,
                    f"residue {t.shift}: coefficient {lhs[e]} vs {rhs_c} at q^{e}",
                )
    for e in range(order):
        if e % k not in covered and lhs[e] != 0:
            return VerifyOutcome(
                False, e, f"uncovered residue {e % k} has nonzero coefficient at q^{e}"
            )
    ok, diff = lhs.equal_upto(Series(assembled, order), order)
    if not ok:
        e, a, b = diff
        return VerifyOutcome(False, e, f"sides differ at q^{e}: {a} vs {b}")
    return VerifyOutcome(True, None, f"verified to order {order} (k={k})")


def derive_sums(d: Decomposition, source: str = "") -> TransferRecord:
    """Read the polygonal sums off the atoms; multipliers play no role."""
    k = d.modulus
    lhs_sum = PolygonalSum(
        tuple(QuadTerm(1, a.i + a.j, a.i - a.j) for a in d.lhs.atoms)
    )
    rhs_sums = []
    shifts = []
    for t in d.rhs:
        rhs_sums.append(
            PolygonalSum(
                tuple(
                    QuadTerm(1, (a.i + a.j) // k, (a.i - a.j) // k) for a in t.atoms
                )
            )
        )
        shifts.append(t.shift)
    return TransferRecord(lhs_sum, tuple(rhs_sums), tuple(shifts), k, source)


def rhs_bound(lhs_bound: int, shift: int, modulus: int) -> int:
    """Largest m with modulus*m + shift <= lhs_bound."""
    return (lhs_bound - shift) // modulus


def transfer_universality(
    rec: TransferRecord,
    base: frozenset | set | tuple = (),
    bound: int = 50000,
) -> TransferOutcome:
    """Propagate a certified lhs to every rhs sum and cross-check.

    base is a collection of sums already accepted as universal (matched by
    normalized value-family keys); an lhs not in base is certified
    directly.  Every rhs sum is then certified up to its derived bound.
    """
    base_keys = {sum_families(s) for s in base}
    lhs_verdict = certify_universal(rec.lhs_sum, bound)
    lhs_ok = lhs_verdict.universal or sum_families(rec.lhs_sum) in base_keys
    rhs_results = []
    if not lhs_ok:
        return TransferOutcome("refused", lhs_verdict, ())
    all_ok = True
    for s, shift in zip(rec.rhs_sums, rec.shifts):
        derived = max(1, rhs_bound(bound, shift, rec.modulus))
        verdict = certify_universal(s, derived)
        rhs_results.append((s, derived, verdict))
        all_ok = all_ok and verdict.universal
    status = "propagated" if all_ok else "inconsistent"
    return TransferOutcome(status, lhs_verdict, tuple(rhs_results))
