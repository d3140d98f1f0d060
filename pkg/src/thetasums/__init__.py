"""Exact q-series arithmetic, theta identities, and universal polygonal sums.

The package has three layers: Series (exact truncated integer power
series), symbolic theta atoms/expressions that evaluate into Series, and
polygonal value families with bounded universality certification.  A
curated catalog ties them together: every stored identity is re-verified
by series expansion and every stored sum is re-certified by sieve, with a
CLI (``thetasums``) on top.
"""

from .polygonal import (
    PolygonalSum,
    QuadTerm,
    UniversalityVerdict,
    certify_universal,
    equivalent_upto,
    polygonal_value,
    representation_series,
    rescale_equivalence,
    term_from_polygonal,
)
from .series import Series
from .theta import (
    ProductTerm,
    ThetaAtom,
    ThetaExpression,
    atom_series,
    canonicalize,
    dissect,
    expression_series,
    product_split,
)
from .transfer import (
    Decomposition,
    TransferRecord,
    derive_sums,
    transfer_universality,
    verify_decomposition,
)

__version__ = "0.1.0"

__all__ = [
    "Decomposition",
    "PolygonalSum",
    "ProductTerm",
    "QuadTerm",
    "Series",
    "ThetaAtom",
    "ThetaExpression",
    "TransferRecord",
    "UniversalityVerdict",
    "atom_series",
    "canonicalize",
    "certify_universal",
    "derive_sums",
    "dissect",
    "equivalent_upto",
    "expression_series",
    "polygonal_value",
    "product_split",
    "representation_series",
    "rescale_equivalence",
    "term_from_polygonal",
    "transfer_universality",
    "verify_decomposition",
]
