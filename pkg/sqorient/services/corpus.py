from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Tuple

from pydantic import BaseModel

from .. import config
from ..log import get_logger
from .basis import (
    betti_profile,
    enumerate_monomials,
    graded_ring,
    mod2_ring,
    relation_slice,
    validate_presentation,
)
from .errors import InvalidInput, UnknownName
from .expr import render_coefficient
from .manifest import load_manifest
from .orientability import (
    euler_characteristic,
    intersection_form,
    max_orientability,
    orientability_verdict,
    parity_theorem_check,
    signature,
    stiefel_whitney,
    wu_class,
)
from .poly import ClassPoly, Mode
from .presentation import Presentation, build_presentation, tensor_product
from .smith import hermite_columns
from .steenrod import complete_table, sq

logger = get_logger(__name__)

MANIFESTS = {
    "EVI": "evi.json",
    "EIII": "eiii.json",
    "EIII-mod2": "eiii-mod2.json",
}

_PROJECTIVE = re.compile(r"(RP|CP|HP)([1-9]\d*)(-int)?\Z")
_OCTONIONIC = re.compile(r"OP2(-int)?\Z")

_GENERATOR_DEGREE = {"RP": 1, "CP": 2, "HP": 4, "OP": 8}


@dataclass(frozen=True)
class GoldenFixture:
    id: str
    entry: str
    kind: str
    expected: Any
    source: Optional[str] = None
    data: Dict[str, Any] = field(default_factory=dict, compare=False, hash=False)


@dataclass(frozen=True)
class GoldenResult:
    fixture: str
    ok: bool
    expected: Any
    actual: Any
    source: Optional[str] = None


# ---------- built-in presentations ----------

def projective_space(family: str, m: int, integral: bool = False) -> Presentation:
    """
    Truncated polynomial ring on one generator: F[x]/(x^(m+1)) with
    |x| = 1, 2, 4 or 8. The Steenrod squares below the top are zero.
    """
    deg = _GENERATOR_DEGREE[family]
    if family == "RP" and integral:
        raise UnknownName("RP^m has 2-torsion; there is no integral RP entry")
    if family == "OP" and m != 2:
        raise UnknownName("the octonionic projective space exists only for m = 2")
    gen = "u" if family == "OP" else "x"
    squares = {gen: {1 << j: "0" for j in range(deg.bit_length() - 1)}}
    suffix = "-int" if integral else ""
    return build_presentation(
        name=f"{family}{m}{suffix}",
        generators=[(gen, deg)],
        relations=[f"{gen}^{m + 1}"],
        dim=m * deg,
        mode=Mode.INT if integral else Mode.GF2,
        steenrod=squares,
        assume_smooth=True,
    )


def _resolve(name: str) -> Tuple[Presentation, Optional[str]]:
    if name in MANIFESTS:
        path = config.CORPUS_DIR / MANIFESTS[name]
        return load_manifest(path).presentation, str(path)
    if name == "OP2xOP2":
        return tensor_product(projective_space("OP", 2), projective_space("OP", 2), name="OP2xOP2"), None
    match = _PROJECTIVE.match(name)
    if match:
        family, m, integral = match.groups()
        return projective_space(family, int(m), bool(integral)), None
    match = _OCTONIONIC.match(name)
    if match:
        return projective_space("OP", 2, bool(match.group(1))), None
    raise UnknownName(f"unknown built-in {name!r}; try {', '.join(builtin_names())}")


def builtin_names() -> List[str]:
    return [*MANIFESTS, "RP<m>", "CP<m>[-int]", "HP<m>[-int]", "OP2[-int]", "OP2xOP2"]


@lru_cache(maxsize=32)
def builtin(name: str) -> Presentation:
    """
    Named presentation from the corpus, validated as a Poincare duality
    algebra before it is handed out.
    """
    presentation, source = _resolve(name)
    betti = validate_presentation(presentation)
    logger.info("loaded built-in %s%s, total rank %d", name, f" from {source}" if source else "", sum(betti))
    return presentation


# ---------- golden fixtures ----------

def load_goldens(path: str | Path) -> List[GoldenFixture]:
    path = Path(path)
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise InvalidInput(f"cannot read golden file {path}: {exc}") from None
    if doc.get("schema") != config.SCHEMA_VERSION:
        raise InvalidInput(f"{path}: unsupported golden schema {doc.get('schema')!r}")
    default_entry = doc.get("entry")
    out = []
    for raw in doc.get("fixtures", []):
        entry = raw.get("entry", default_entry)
        if entry is None or "id" not in raw or "kind" not in raw:
            raise InvalidInput(f"{path}: fixture {raw.get('id', '?')} needs id, kind and entry")
        if raw["kind"] not in CHECKS:
            raise InvalidInput(f"{path}: fixture {raw['id']} has unknown kind {raw['kind']!r}")
        out.append(
            GoldenFixture(
                id=raw["id"],
                entry=entry,
                kind=raw["kind"],
                expected=raw.get("expected"),
                source=raw.get("source"),
                data=raw,
            )
        )
    return out


def golden_suite(directory: str | Path | None = None, entry: Optional[str] = None) -> List[GoldenFixture]:
    directory = Path(directory) if directory is not None else config.GOLDEN_DIR
    if not directory.is_dir():
        raise InvalidInput(f"golden directory {directory} does not exist")
    fixtures = []
    for path in sorted(directory.glob("*.json")):
        fixtures.extend(load_goldens(path))
    if entry is not None:
        fixtures = [f for f in fixtures if f.entry == entry]
    return fixtures


def check_fixture(fixture: GoldenFixture, presentation: Optional[Presentation] = None) -> GoldenResult:
    """
    Recompute one golden value. `presentation` replaces the built-in
    entry, e.g. for a manifest loaded from disk under the same name.
    """
    p = presentation if presentation is not None else builtin(fixture.entry)
    assignment = _assignment(fixture, p)
    if assignment:
        p = p.specialise(assignment)
    actual, ok = CHECKS[fixture.kind](fixture, p)
    if not ok:
        logger.warning("golden %s: expected %s, got %s", fixture.id, fixture.expected, actual)
    return GoldenResult(fixture.id, ok, fixture.expected, actual, fixture.source)


def _assignment(fixture: GoldenFixture, p: Presentation) -> Dict[str, int]:
    if "instantiate" in fixture.data:
        return p.instantiation(fixture.data["instantiate"])
    return dict(fixture.data.get("set", {}))


class CorpusEntry(BaseModel):
    """
    A built-in presentation together with the golden fixtures filed
    under its name.
    """
    name: str
    presentation: Presentation
    source: Optional[str] = None
    goldens: List[GoldenFixture] = []

    class Config:
        arbitrary_types_allowed = True
        frozen = True


def corpus_entry(name: str, golden_dir: str | Path | None = None) -> CorpusEntry:
    presentation = builtin(name)
    source = str(config.CORPUS_DIR / MANIFESTS[name]) if name in MANIFESTS else None
    directory = Path(golden_dir) if golden_dir is not None else config.GOLDEN_DIR
    goldens = golden_suite(directory, entry=presentation.name) if directory.is_dir() else []
    return CorpusEntry(name=name, presentation=presentation, source=source, goldens=goldens)


# ----- checks, one per fixture kind -----

Check = Callable[[GoldenFixture, Presentation], Tuple[Any, bool]]


def _same(actual: Any, expected: Any) -> Tuple[Any, bool]:
    return actual, actual == expected


def _check_betti(f: GoldenFixture, p: Presentation):
    return _same(list(betti_profile(p)), f.expected)


def _check_ranks(f: GoldenFixture, p: Presentation):
    ring = graded_ring(p)
    return _same([ring.degree_basis(d).rank for d in range(p.dim + 1)], f.expected)


def _check_euler(f: GoldenFixture, p: Presentation):
    return _same(euler_characteristic(p), f.expected)


def _check_monomial_count(f: GoldenFixture, p: Presentation):
    return _same(len(enumerate_monomials(p, f.data["degree"])), f.expected)


def _check_relation_slice(f: GoldenFixture, p: Presentation):
    return _same(len(relation_slice(p, f.data["degree"])), f.expected)


def _check_relation_degrees(f: GoldenFixture, p: Presentation):
    return _same(p.relation_degrees(), f.expected)


def _check_top_monomials(f: GoldenFixture, p: Presentation):
    d = f.data["degree"]
    ring = mod2_ring(p)
    basis = ring.degree_basis(d)
    if basis.rank != 1:
        return f"degree {d} has rank {basis.rank}", False
    actual = sorted(p.gens.render_monomial(m) for m in basis.monomials if basis.coordinates(m)[0])
    expected = sorted(str(p.parse_square(text)) for text in f.expected)
    return _same(actual, expected)


def _check_square(f: GoldenFixture, p: Presentation):
    table = complete_table(p)
    generator, index = f.data["generator"], f.data["index"]
    value = table.value(generator, index)
    expected = p.parse_square(f.expected)
    if f.data.get("compare", "polynomial") == "class":
        ring = mod2_ring(p)
        d = p.gens.degrees[p.gens.index(generator)] + index
        return str(value), ring.normal_form(value, d) == ring.normal_form(expected, d)
    return str(value), value == expected


def _check_sq(f: GoldenFixture, p: Presentation):
    c = p.parse(f.data["class"])
    coords = sq(c, f.data["n"], p)
    return _same([render_coefficient(x) for x in coords], f.expected)


def _check_verdict(f: GoldenFixture, p: Presentation):
    v = orientability_verdict(p, None, f.data["k"], f.data.get("method", "squares"))
    actual: Dict[str, Any] = {
        "status": v.status,
        "conditions": [c.render() for c in v.conditions],
        "witness_degree": v.witness.degree if v.witness else None,
    }
    ok = all(actual.get(key) == value for key, value in f.expected.items())
    return actual, ok


def _check_max(f: GoldenFixture, p: Presentation):
    scan = max_orientability(p)
    actual = {"k": scan.k, "stopped_by": scan.stopped_by}
    return actual, all(actual.get(key) == value for key, value in f.expected.items())


def _check_parity(f: GoldenFixture, p: Presentation):
    return _same(parity_theorem_check(p).consistent, f.expected)


def _same_classes(p: Presentation, actual: List[ClassPoly], expected: List[str]) -> bool:
    if len(actual) != len(expected):
        return False
    ring = mod2_ring(p)
    for d, (a, text) in enumerate(zip(actual, expected)):
        e = p.parse_square(text)
        if ring.normal_form(a, d) != ring.normal_form(e.to_domain(a.domain), d):
            return False
    return True


def _check_wu(f: GoldenFixture, p: Presentation):
    i = f.data["index"]
    v = wu_class(p, None, i).cls
    ring = mod2_ring(p)
    expected = p.parse_square(f.expected).to_domain(v.domain)
    return str(v), ring.normal_form(v, i) == ring.normal_form(expected, i)


def _check_stiefel_whitney(f: GoldenFixture, p: Presentation):
    w = stiefel_whitney(p)
    return [str(c) for c in w], _same_classes(p, w, f.expected)


def _check_coordinates_abs(f: GoldenFixture, p: Presentation):
    basis = graded_ring(p).degree_basis(f.data["degree"])
    if basis.rank != 1:
        return f"degree {basis.degree} has rank {basis.rank}", False
    actual = {p.gens.render_monomial(m): abs(basis.coordinates(m)[0]) for m in basis.monomials}
    expected = {str(p.parse(text)): value for text, value in f.expected.items()}
    return _same(actual, expected)


def _check_lattice(f: GoldenFixture, p: Presentation):
    """
    Coordinates are only canonical up to a unimodular change of the
    free basis; compare the column Hermite forms instead.
    """
    basis = graded_ring(p).degree_basis(f.data["degree"])
    expected_by_mono = {p.parse(text).monomials()[0]: row for text, row in f.expected.items()}
    if basis.torsion or set(expected_by_mono) != set(basis.monomials):
        return {p.gens.render_monomial(m): list(basis.coordinates(m)) for m in basis.monomials}, False
    actual_rows = [list(basis.coordinates(m)) for m in basis.monomials]
    expected_rows = [list(expected_by_mono[m]) for m in basis.monomials]
    actual = {p.gens.render_monomial(m): row for m, row in zip(basis.monomials, actual_rows)}
    ok = hermite_columns(actual_rows, basis.rank).H == hermite_columns(expected_rows, basis.rank).H
    return actual, ok


def _check_intersection_form(f: GoldenFixture, p: Presentation):
    return _same([list(row) for row in intersection_form(p).matrix], f.expected)


def _check_signature(f: GoldenFixture, p: Presentation):
    return _same(signature(p), f.expected)


CHECKS: Dict[str, Check] = {
    "betti": _check_betti,
    "ranks": _check_ranks,
    "euler": _check_euler,
    "monomial_count": _check_monomial_count,
    "relation_slice": _check_relation_slice,
    "relation_degrees": _check_relation_degrees,
    "top_monomials": _check_top_monomials,
    "square": _check_square,
    "sq": _check_sq,
    "verdict": _check_verdict,
    "max_orientability": _check_max,
    "parity": _check_parity,
    "wu": _check_wu,
    "stiefel_whitney": _check_stiefel_whitney,
    "coordinates_abs": _check_coordinates_abs,
    "lattice": _check_lattice,
    "intersection_form": _check_intersection_form,
    "signature": _check_signature,
}
