"""The curated identity catalog: loading, validation, and batch checking.

Catalog files are plain text, one entry per block:

    [key] kind: <kind> ref: "<source location>"
    field: value
    ...

with a blank line between blocks and '#' comments.  Kinds and their fields:

    identity       lhs:, rhs:            theta expressions; checked by series
    decomposition  lhs:, modulus:, rhs:, base:, claims:  (claims '|'-separated)
    equivalence    chain:                sums joined by '~', checked pairwise
    base-fact      sum:                  externally known sum, re-certified
    target-sum     sum:, via:, anchor:   certified; via names its derivation

Entries parse at load time; malformed data is a startup failure.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from pathlib import Path

from . import dsl
from .polygonal import (
    PolygonalSum,
    certify_universal,
    equivalent_upto,
    sum_families,
    sum_label,
)
from .theta import ThetaExpression, expression_series
from .transfer import (
    Decomposition,
    TransferRecord,
    derive_sums,
    rhs_bound,
    verify_decomposition,
)

KINDS = ("identity", "decomposition", "equivalence", "base-fact", "target-sum")


class CatalogError(ValueError):
    """Malformed catalog data."""


@dataclass
class CatalogEntry:
    key: str
    kind: str
    ref: str
    fields: dict[str, str]
    # Parsed payloads (populated by kind):
    lhs: ThetaExpression | None = None
    rhs: ThetaExpression | None = None
    decomposition: Decomposition | None = None
    base: PolygonalSum | None = None
    claims: tuple[PolygonalSum, ...] = ()
    chain: tuple[PolygonalSum, ...] = ()
    target: PolygonalSum | None = None
    via: str | None = None
    anchor: str | None = None


@dataclass
class Catalog:
    entries: list[CatalogEntry]
    by_key: dict[str, CatalogEntry] = field(default_factory=dict)

    def __post_init__(self):
        self.by_key = {}
        for e in self.entries:
            if e.key in self.by_key:
                raise CatalogError(f"duplicate catalog key {e.key!r}")
            self.by_key[e.key] = e

    def of_kind(self, kind: str) -> list[CatalogEntry]:
        return [e for e in self.entries if e.kind == kind]

    def __len__(self):
        return len(self.entries)


def _parse_header(line: str, where: str) -> tuple[str, str, str]:
    if not line.startswith("["):
        raise CatalogError(f"{where}: entry header must start with '[': {line!r}")
    close = line.find("]")
    if close < 0:
        raise CatalogError(f"{where}: unterminated key in {line!r}")
    key = line[1:close].strip()
    rest = line[close + 1 :].strip()
    if not rest.startswith("kind:"):
        raise CatalogError(f"{where}: missing kind in {line!r}")
    rest = rest[5:].strip()
    parts = rest.split("ref:", 1)
    kind = parts[0].strip()
    if kind not in KINDS:
        raise CatalogError(f"{where}: unknown kind {kind!r}")
    ref = ""
    if len(parts) == 2:
        ref = parts[1].strip().strip('"')
    return key, kind, ref


def parse_catalog_text(text: str, where: str = "<catalog>") -> list[CatalogEntry]:
    entries: list[CatalogEntry] = []
    current: CatalogEntry | None = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        loc = f"{where}:{lineno}"
        if line.startswith("["):
            key, kind, ref = _parse_header(line, loc)
            current = CatalogEntry(key, kind, ref, {})
            entries.append(current)
            continue
        if current is None:
            raise CatalogError(f"{loc}: field outside any entry: {line!r}")
        name, sep, value = line.partition(":")
        if not sep:
            raise CatalogError(f"{loc}: expected 'field: value', got {line!r}")
        name = name.strip()
        if name in current.fields:
            raise CatalogError(f"{loc}: duplicate field {name!r} in [{current.key}]")
        current.fields[name] = value.strip()
    for e in entries:
        _parse_payload(e)
    return entries


def _require(entry: CatalogEntry, name: str) -> str:
    if name not in entry.fields:
        raise CatalogError(f"[{entry.key}]: missing field {name!r}")
    return entry.fields[name]


def _parse_payload(entry: CatalogEntry) -> None:
    try:
        if entry.kind == "identity":
            entry.lhs = dsl.parse_theta_expression(_require(entry, "lhs"))
            entry.rhs = dsl.parse_theta_expression(_require(entry, "rhs"))
        elif entry.kind == "decomposition":
            lhs = dsl.parse_theta_expression(_require(entry, "lhs"))
            if len(lhs.terms) != 1:
                raise CatalogError(f"[{entry.key}]: lhs must be a single product")
            rhs = dsl.parse_theta_expression(_require(entry, "rhs"))
            modulus = int(_require(entry, "modulus"))
            entry.decomposition = Decomposition(lhs.terms[0], modulus, rhs.terms)
            if "base" in entry.fields:
                entry.base = dsl.parse_polygonal_sum(entry.fields["base"])
            if "claims" in entry.fields:
                entry.claims = tuple(
                    dsl.parse_polygonal_sum(part)
                    for part in entry.fields["claims"].split("|")
                )
        elif entry.kind == "equivalence":
            entry.chain = tuple(dsl.parse_chain(_require(entry, "chain")))
            if len(entry.chain) < 2:
                raise CatalogError(f"[{entry.key}]: chain needs at least two sums")
        elif entry.kind == "base-fact":
            entry.target = dsl.parse_polygonal_sum(_require(entry, "sum"))
        elif entry.kind == "target-sum":
            entry.target = dsl.parse_polygonal_sum(_require(entry, "sum"))
            entry.via = entry.fields.get("via")
            entry.anchor = entry.fields.get("anchor")
    except (dsl.ParseError, ValueError) as exc:
        if isinstance(exc, CatalogError):
            raise
        raise CatalogError(f"[{entry.key}]: {exc}") from None


ENV_CATALOG = "THETASUMS_CATALOG"


def default_catalog_dir():
    return resources.files("thetasums") / "data"


def load_catalog(path: str | Path | None = None) -> Catalog:
    """Load a catalog from a file, a directory of *.cat files, or the default.

    With no path, the THETASUMS_CATALOG environment variable is consulted
    and then the packaged data directory.
    """
    if path is None:
        path = os.environ.get(ENV_CATALOG)
    entries: list[CatalogEntry] = []
    if path is None:
        root = default_catalog_dir()
        names = sorted(r.name for r in root.iterdir() if r.name.endswith(".cat"))
        for name in names:
            entries.extend(
                parse_catalog_text((root / name).read_text(), name)
            )
        return Catalog(entries)
    path = Path(path)
    if path.is_dir():
        for file in sorted(path.glob("*.cat")):
            entries.extend(parse_catalog_text(file.read_text(), file.name))
    else:
        entries.extend(parse_catalog_text(path.read_text(), path.name))
    return Catalog(entries)


# -- per-entry checks ----------------------------------------------------------


@dataclass(frozen=True)
class Row:
    key: str
    kind: str
    status: str  # pass | fail
    detail: str

    @property
    def ok(self) -> bool:
        return self.status == "pass"


def _check_identity(entry: CatalogEntry, order: int) -> Row:
    shifts = [t.shift for t in entry.lhs.terms + entry.rhs.terms]
    worst = max(shifts) if shifts else 0
    if worst >= order:
        return Row(entry.key, entry.kind, "fail", f"insufficient order {order} for shift {worst}")
    left = expression_series(entry.lhs, order)
    right = expression_series(entry.rhs, order)
    ok, diff = left.equal_upto(right, order)
    if ok:
        return Row(entry.key, entry.kind, "pass", f"series equal to order {order}")
    e, a, b = diff
    return Row(entry.key, entry.kind, "fail", f"first difference at q^{e}: {a} vs {b}")


def _match_claims(rec: TransferRecord, claims: tuple[PolygonalSum, ...]) -> str | None:
    if len(claims) != len(rec.rhs_sums):
        return f"{len(claims)} claims for {len(rec.rhs_sums)} residue terms"
    for idx, (claim, derived) in enumerate(zip(claims, rec.rhs_sums), start=1):
        if sum_families(claim) != sum_families(derived):
            return (
                f"claim {idx} is {sum_label(claim)} but the atoms give "
                f"{sum_label(derived)}"
            )
    return None


def _check_decomposition(
    entry: CatalogEntry, order: int, bound: int, catalog: Catalog
) -> Row:
    d = entry.decomposition
    outcome = verify_decomposition(d, order)
    if not outcome.ok:
        return Row(entry.key, entry.kind, "fail", outcome.detail)
    rec = derive_sums(d, entry.key)
    problems = []
    if entry.claims:
        mismatch = _match_claims(rec, entry.claims)
        if mismatch:
            problems.append(mismatch)
    lhs_verdict = certify_universal(rec.lhs_sum, bound)
    if not lhs_verdict.universal:
        problems.append(
            f"lhs sum {sum_label(rec.lhs_sum)} missing {lhs_verdict.missing[:3]}"
        )
    if entry.base is not None:
        base_verdict = certify_universal(entry.base, bound)
        if not base_verdict.universal:
            problems.append(f"base {sum_label(entry.base)} not certified")
        eq, witness = equivalent_upto(rec.lhs_sum, entry.base, bound)
        if not eq:
            problems.append(f"lhs and base value sets differ at {witness}")
    for s, shift in zip(rec.rhs_sums, rec.shifts):
        derived = max(1, rhs_bound(bound, shift, rec.modulus))
        verdict = certify_universal(s, derived)
        if not verdict.universal:
            problems.append(
                f"rhs {sum_label(s)} missing {verdict.missing[:3]} up to {derived}"
            )
    if problems:
        return Row(entry.key, entry.kind, "fail", "; ".join(problems))
    return Row(
        entry.key,
        entry.kind,
        "pass",
        f"verified to order {order}; transfer certified to bound {bound} (k={d.modulus})",
    )


def _check_equivalence(entry: CatalogEntry, bound: int) -> Row:
    for left, right in zip(entry.chain, entry.chain[1:]):
        eq, witness = equivalent_upto(left, right, bound)
        if not eq:
            return Row(
                entry.key,
                entry.kind,
                "fail",
                f"{sum_label(left)} vs {sum_label(right)}: differ at {witness}",
            )
    notes = [f"{len(entry.chain) - 1} link(s) hold to bound {bound}"]
    if entry.fields.get("certify") == "members":
        for s in entry.chain:
            verdict = certify_universal(s, bound)
            if not verdict.universal:
                return Row(
                    entry.key,
                    entry.kind,
                    "fail",
                    f"member {sum_label(s)} missing {verdict.missing[:3]}",
                )
        notes.append(f"all {len(entry.chain)} members certified universal")
    return Row(entry.key, entry.kind, "pass", "; ".join(notes))


def _check_base_fact(entry: CatalogEntry, bound: int) -> Row:
    verdict = certify_universal(entry.target, bound)
    if verdict.universal:
        return Row(entry.key, entry.kind, "pass", f"certified universal up to {bound}")
    return Row(
        entry.key, entry.kind, "fail", f"missing {verdict.missing[:5]} up to {bound}"
    )


def _theorem_anchor_keys(catalog: Catalog) -> dict[tuple, str]:
    """Family-key index of every theorem target and chain member."""
    cached = getattr(catalog, "_anchor_index", None)
    if cached is not None:
        return cached
    index: dict[tuple, str] = {}
    for e in catalog.entries:
        if e.kind == "target-sum" and e.key.startswith("thm"):
            index.setdefault(sum_families(e.target), e.key)
        elif e.kind == "equivalence" and e.key.startswith("thm3.4"):
            for s in e.chain:
                index.setdefault(sum_families(s), e.key)
    catalog._anchor_index = index
    return index


def _check_target(
    entry: CatalogEntry, bound: int, catalog: Catalog, order: int
) -> Row:
    verdict = certify_universal(entry.target, bound)
    if not verdict.universal:
        return Row(
            entry.key,
            entry.kind,
            "fail",
            f"missing {verdict.missing[:5]} up to {bound}",
        )
    notes = [f"certified universal up to {bound}"]
    if entry.via:
        err = _check_via(entry, catalog, order)
        if err:
            return Row(entry.key, entry.kind, "fail", err)
        notes.append(f"via {entry.via}")
    if entry.anchor is not None or entry.key.startswith("sec1"):
        index = _theorem_anchor_keys(catalog)
        hit = index.get(sum_families(entry.target))
        if entry.anchor == "none":
            if hit:
                return Row(
                    entry.key, entry.kind, "fail", f"unexpected theorem anchor {hit}"
                )
            notes.append("no theorem anchor (known source discrepancy)")
        elif hit is None:
            return Row(entry.key, entry.kind, "fail", "no theorem list contains this sum")
        else:
            notes.append(f"anchored at {hit}")
    return Row(entry.key, entry.kind, "pass", "; ".join(notes))


@lru_cache(maxsize=256)
def _verified_decomposition(d: Decomposition, order: int):
    return verify_decomposition(d, order)


def _check_via(entry: CatalogEntry, catalog: Catalog, order: int) -> str | None:
    """Validate a 'via: KEY [rN]' annotation against the deriving entry.

    For decompositions the deriving identity is re-verified by series, so a
    theorem reproduction is self-contained even when run key-by-key.
    """
    parts = entry.via.split()
    source = catalog.by_key.get(parts[0])
    if source is None:
        return f"via references unknown key {parts[0]!r}"
    if source.kind == "decomposition":
        if len(parts) != 2 or not parts[1].startswith("r"):
            return f"via {entry.via!r} needs a residue term like 'r2'"
        idx = int(parts[1][1:]) - 1
        outcome = _verified_decomposition(source.decomposition, order)
        if not outcome.ok:
            return f"deriving identity {parts[0]} failed: {outcome.detail}"
        rec = derive_sums(source.decomposition, source.key)
        if not 0 <= idx < len(rec.rhs_sums):
            return f"via {entry.via!r}: no residue term {idx + 1}"
        if sum_families(rec.rhs_sums[idx]) != sum_families(entry.target):
            return (
                f"via {entry.via!r} derives {sum_label(rec.rhs_sums[idx])}, "
                f"not {sum_label(entry.target)}"
            )
        return None
    if source.kind == "equivalence":
        if any(
            sum_families(s) == sum_families(entry.target) for s in source.chain
        ):
            return None
        return f"via {entry.via!r}: chain does not contain this sum"
    return f"via {entry.via!r} must name a decomposition or equivalence"


def check_entry(entry: CatalogEntry, order: int, bound: int, catalog: Catalog) -> Row:
    if entry.kind == "identity":
        return _check_identity(entry, order)
    if entry.kind == "decomposition":
        return _check_decomposition(entry, order, bound, catalog)
    if entry.kind == "equivalence":
        return _check_equivalence(entry, bound)
    if entry.kind == "base-fact":
        return _check_base_fact(entry, bound)
    if entry.kind == "target-sum":
        return _check_target(entry, bound, catalog, order)
    raise CatalogError(f"unknown kind {entry.kind!r}")


@dataclass
class Report:
    order: int
    bound: int
    rows: list[Row]

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.rows)

    @property
    def passed(self) -> int:
        return sum(1 for r in self.rows if r.ok)

    @property
    def failed(self) -> int:
        return sum(1 for r in self.rows if not r.ok)

    def to_dict(self) -> dict:
        return {
            "schema": "thetasums-report/1",
            "config": {"order": self.order, "bound": self.bound},
            "summary": {"pass": self.passed, "fail": self.failed},
            "rows": [
                {"key": r.key, "kind": r.kind, "status": r.status, "detail": r.detail}
                for r in self.rows
            ],
        }


_WORKER_STATE: dict = {}


def _init_worker(path, order, bound):
    catalog = load_catalog(path)
    _WORKER_STATE["catalog"] = catalog
    _WORKER_STATE["order"] = order
    _WORKER_STATE["bound"] = bound


def _worker_check(key: str) -> Row:
    catalog = _WORKER_STATE["catalog"]
    return check_entry(
        catalog.by_key[key], _WORKER_STATE["order"], _WORKER_STATE["bound"], catalog
    )


def run_catalog(
    catalog: Catalog,
    order: int = 1000,
    bound: int = 50000,
    kinds: tuple[str, ...] | None = None,
    keys: list[str] | None = None,
    workers: int = 1,
    catalog_path=None,
) -> Report:
    """Check every selected entry and return one row per entry, key-sorted."""
    selected = catalog.entries
    if kinds is not None:
        selected = [e for e in selected if e.kind in kinds]
    if keys is not None:
        wanted = set(keys)
        selected = [e for e in selected if e.key in wanted]
    selected = sorted(selected, key=lambda e: e.key)
    if workers > 1 and len(selected) > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(
            max_workers=workers,
            initializer=_init_worker,
            initargs=(catalog_path, order, bound),
        ) as pool:
            rows = list(pool.map(_worker_check, [e.key for e in selected], chunksize=8))
    else:
        rows = [check_entry(e, order, bound, catalog) for e in selected]
    return Report(order, bound, rows)
