from typing import Any, Dict, List, Literal, Optional

from pydantic import BaseModel, Field, field_validator

from . import config


# -----------------
# MANIFEST SCHEMAS
# -----------------

class GeneratorSpec(BaseModel):
    name: str = Field(..., pattern=r"^[A-Za-z_][A-Za-z0-9_']*$")
    degree: int = Field(..., ge=1)

    class Config:
        extra = "forbid"


class Manifest(BaseModel):
    schema_version: int = Field(config.SCHEMA_VERSION, alias="schema")
    name: str = Field(..., min_length=1)
    description: Optional[str] = None
    mode: Literal["gf2", "gf2-parametric", "int"] = "gf2"
    dimension: int = Field(..., ge=1)
    generators: List[GeneratorSpec] = Field(..., min_length=1)
    parameters: List[str] = []
    relations: List[str] = []
    steenrod: Dict[str, Dict[int, str]] = {}
    assume_smooth: bool = False
    instantiations: Dict[str, Dict[str, int]] = {}

    class Config:
        populate_by_name = True
        extra = "forbid"

    @field_validator("schema_version")
    @classmethod
    def known_schema(cls, v: int) -> int:
        if v != config.SCHEMA_VERSION:
            raise ValueError(f"unsupported schema version {v}; expected {config.SCHEMA_VERSION}")
        return v


# -----------------
# REPORT SCHEMAS
# -----------------

class InputRead(BaseModel):
    name: str
    mode: str
    dimension: int
    digest: str
    assignment: Dict[str, int] = {}


class Report(BaseModel):
    schema_version: int = Field(config.SCHEMA_VERSION, alias="schema")
    tool: str = "sqorient"
    version: str
    command: str
    input: InputRead
    result: Any = None

    class Config:
        populate_by_name = True


class Limitation(BaseModel):
    stage: str
    message: str
    entry: Optional[str] = None
    level: Optional[int] = None


# -----------------
# BASIS SCHEMAS
# -----------------

class DegreeRead(BaseModel):
    degree: int
    rank: int
    monomial_count: int
    relation_rank: int
    basis: List[str]
    torsion: List[int] = []
    nonzero: int
    coordinates: Optional[Dict[str, List[str]]] = None


class BasisRead(BaseModel):
    degrees: List[DegreeRead]
    betti: Optional[List[int]] = None


class MonomialsRead(BaseModel):
    degree: int
    count: int
    monomials: List[str]


# -----------------
# STEENROD SCHEMAS
# -----------------

class SquareRead(BaseModel):
    cls: str = Field(..., alias="class")
    n: int
    degree: int
    value: str
    coordinates: List[str]

    class Config:
        populate_by_name = True


class TableEntryRead(BaseModel):
    generator: str
    index: int
    value: Optional[str] = None
    provenance: str
    missing: Optional[str] = None


class TableRead(BaseModel):
    entries: List[TableEntryRead]
    missing: List[str] = []
    adem_residues: List[str] = []
    constraints: List[str] = []


# -----------------
# ORIENTABILITY SCHEMAS
# -----------------

class ClassRead(BaseModel):
    index: int
    value: str
    note: Optional[str] = None


class WitnessRead(BaseModel):
    degree: int
    index: int
    cls: str = Field(..., alias="class")

    class Config:
        populate_by_name = True


class VerdictRead(BaseModel):
    k: int
    status: Literal["yes", "no", "conditional"]
    method: str
    conditions: List[str] = []
    witness: Optional[WitnessRead] = None
    annotations: List[str] = []
    assumptions: List[str] = []


class ScanRead(BaseModel):
    k: int
    stopped_by: str
    missing: Optional[str] = None


class ParityLevelRead(BaseModel):
    k: int
    chi_even: bool
    dim_divisible: bool
    consistent: bool


class ParityRead(BaseModel):
    chi: int
    dimension: int
    consistent: bool
    levels: List[ParityLevelRead]
    limitation: Optional[str] = None


class EulerRead(BaseModel):
    chi: int
    ranks: List[int]


class SignatureRead(BaseModel):
    degree: int
    matrix: List[List[int]]
    signature: int


class GoldenRead(BaseModel):
    fixture: str
    ok: bool
    expected: Any = None
    actual: Any = None
    source: Optional[str] = None


class FullReport(BaseModel):
    betti: Optional[List[int]] = None
    chi: Optional[int] = None
    table_missing: List[str] = []
    table_constraints: List[str] = []
    wu: List[ClassRead] = []
    stiefel_whitney: List[ClassRead] = []
    verdicts: List[VerdictRead] = []
    max_orientability: Optional[ScanRead] = None
    parity: Optional[ParityRead] = None
    signature: Optional[SignatureRead] = None
    limitations: List[Limitation] = []
    goldens: List[GoldenRead] = []


# -----------------
# CONVERTERS
# -----------------

def class_read(index: int, cls: Any, note: Optional[str] = None) -> ClassRead:
    return ClassRead(index=index, value=str(cls), note=note)


def verdict_read(v: Any) -> VerdictRead:
    witness = None
    if v.witness is not None:
        witness = WitnessRead(degree=v.witness.degree, index=v.witness.index, cls=str(v.witness.cls))
    return VerdictRead(
        k=v.k,
        status=v.status,
        method=v.method,
        conditions=[c.render() for c in v.conditions],
        witness=witness,
        annotations=list(v.annotations),
        assumptions=[c.render() for c in v.assumptions],
    )


def scan_read(scan: Any) -> ScanRead:
    return ScanRead(k=scan.k, stopped_by=scan.stopped_by, missing=scan.missing)


def parity_read(check: Any) -> ParityRead:
    return ParityRead(
        chi=check.chi,
        dimension=check.dim,
        consistent=check.consistent,
        levels=[
            ParityLevelRead(k=lv.k, chi_even=lv.chi_even, dim_divisible=lv.dim_divisible, consistent=lv.consistent)
            for lv in check.levels
        ],
        limitation=check.limitation,
    )


def golden_read(result: Any) -> GoldenRead:
    return GoldenRead(
        fixture=result.fixture,
        ok=result.ok,
        expected=result.expected,
        actual=result.actual,
        source=result.source,
    )
