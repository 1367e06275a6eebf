from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, List, Mapping, Optional, Sequence, Tuple

from ..log import get_logger
from . import gf2
from .basis import graded_ring, mod2_ring
from .conditions import ParamIdeal, canonical_conditions
from .errors import (
    DegeneratePairing,
    DimensionOverflow,
    InvalidInput,
    NotApplicable,
    OddMiddleTorsion,
    TableIncomplete,
)
from .poly import ClassPoly, Domain, Mode, ParamPoly
from .presentation import Presentation
from .steenrod import SquareTable, complete_table, sq, top_square

logger = get_logger(__name__)

YES = "yes"
NO = "no"
CONDITIONAL = "conditional"

METHODS = ("squares", "wu", "stiefel-whitney")


@dataclass(frozen=True)
class WuClass:
    index: int
    cls: ClassPoly
    note: Optional[str] = None


@dataclass(frozen=True)
class Witness:
    degree: int
    index: int
    cls: ClassPoly


@dataclass(frozen=True)
class Verdict:
    k: int
    status: str
    method: str = "squares"
    conditions: Tuple[ParamPoly, ...] = ()
    witness: Optional[Witness] = None
    annotations: Tuple[str, ...] = ()
    assumptions: Tuple[ParamPoly, ...] = ()

    @property
    def is_yes(self) -> bool:
        return self.status == YES


@dataclass(frozen=True)
class IntersectionForm:
    degree: int
    matrix: Tuple[Tuple[int, ...], ...]


def _table(p: Presentation, table: Optional[SquareTable]) -> SquareTable:
    return table if table is not None else complete_table(p)


def _add(dom: Domain, a: Sequence[Any], b: Sequence[Any]) -> Tuple[Any, ...]:
    return tuple(dom.add(x, y) for x, y in zip(a, b))


# ---------- Wu and Stiefel-Whitney classes ----------

def wu_class(p: Presentation, table: Optional[SquareTable], i: int) -> WuClass:
    """
    v_i is the class with v_i * x = Sq^i x on the top for every x of
    degree n - i; the pairing makes it unique.
    """
    table = _table(p, table)
    ring = mod2_ring(p)
    n = p.dim
    if not 0 <= i <= n:
        raise DimensionOverflow(f"Wu class index {i} is outside 0..{n}")
    if i == 0:
        return WuClass(0, ClassPoly.one(p.gens, table.domain))
    if 2 * i > n:
        return WuClass(i, ClassPoly.zero(p.gens, table.domain), note=f"Sq^{i} vanishes in degree {n - i} < {i}")

    P = ring.pairing(i).as_array()
    inverse = gf2.inverse(P.T.copy())
    if inverse is None:
        raise DegeneratePairing(f"cup pairing between degrees {i} and {n - i} is degenerate")
    complement = ring.degree_basis(n - i).basis
    rhs = [top_square(x, i, p, table) for x in complement]

    dom = table.domain
    coords = []
    for row in inverse:
        c = dom.zero
        for bit, r in zip(row, rhs):
            if bit:
                c = dom.add(c, r)
        coords.append(c)
    v = ring.coordinates_to_class(i, coords).to_domain(dom)
    logger.debug("%s: v_%d = %s", p.name, i, v)
    return WuClass(i, v)


def wu_classes(p: Presentation, table: Optional[SquareTable] = None, upto: Optional[int] = None) -> List[WuClass]:
    table = _table(p, table)
    top = p.dim if upto is None else min(upto, p.dim)
    return [wu_class(p, table, i) for i in range(top + 1)]


def stiefel_whitney(
    p: Presentation, table: Optional[SquareTable] = None, upto: Optional[int] = None
) -> List[ClassPoly]:
    """
    w = Sq(v): w_j = sum_i Sq^i v_(j-i). Only v_m with m <= upto are needed.
    """
    table = _table(p, table)
    ring = mod2_ring(p)
    dom = table.domain
    top = p.dim if upto is None else min(upto, p.dim)
    wu = [wu_class(p, table, m).cls for m in range(top + 1)]

    out = [ClassPoly.one(p.gens, dom)]
    for j in range(1, top + 1):
        coords = tuple(dom.zero for _ in range(ring.degree_basis(j).rank))
        for i in range(0, j // 2 + 1):
            v = wu[j - i]
            if v.is_zero():
                continue
            coords = _add(dom, coords, sq(v, i, p, table, degree=j - i))
        out.append(ring.coordinates_to_class(j, coords).to_domain(dom))
    return out


def euler_characteristic(p: Presentation) -> int:
    if p.mode is Mode.INT:
        ring = graded_ring(p)
        ranks = [ring.degree_basis(d).rank for d in range(p.dim + 1)]
    else:
        ranks = list(graded_ring(p).betti_profile())
    return sum(r if d % 2 == 0 else -r for d, r in enumerate(ranks))


# ---------- verdicts ----------

class _Collector:
    def __init__(self):
        self.conditions: List[ParamPoly] = []
        self.witness: Optional[Witness] = None
        self.first_conditional: Optional[Witness] = None

    def add(self, coefficient: Any, witness: Witness) -> bool:
        """
        Record one coefficient that must vanish. Returns True on an
        unconditional failure.
        """
        if isinstance(coefficient, ParamPoly):
            if coefficient.is_zero():
                return False
            if not coefficient.is_constant():
                if coefficient not in self.conditions:
                    self.conditions.append(coefficient)
                    if self.first_conditional is None:
                        self.first_conditional = witness
                return False
        elif not coefficient:
            return False
        self.witness = witness
        return True

    def verdict(self, k: int, method: str, annotations: Tuple[str, ...], constraints: ParamIdeal) -> Verdict:
        """
        Conditions come back as the reduced Boolean basis of what was
        collected, minus anything the Adem constraints already imply.
        """
        if constraints.is_unit:
            annotations += ("adem_inconsistent",)
        if self.witness is not None:
            return Verdict(k, NO, method, (), self.witness, annotations)
        if not self.conditions:
            return Verdict(k, YES, method, (), None, annotations)
        names = constraints.names
        assumed = () if constraints.is_unit else constraints.generators
        ideal = ParamIdeal(names, [*self.conditions, *assumed])
        if ideal.is_unit:
            return Verdict(k, NO, method, (), self.first_conditional, annotations + ("unsatisfiable",), assumed)
        kept = tuple(
            c for c in canonical_conditions(names, self.conditions) if not (assumed and constraints.contains(c))
        )
        if not kept:
            return Verdict(k, YES, method, (), None, annotations, assumed)
        return Verdict(k, CONDITIONAL, method, kept, None, annotations, assumed)


def orientability_verdict(
    p: Presentation,
    table: Optional[SquareTable],
    k: int,
    method: str = "squares",
    assignment: Optional[Mapping[str, int]] = None,
) -> Verdict:
    """
    Is p k-orientable? `squares` checks Sq^(2^i) into the top on every
    basis element for i < k, `wu` checks v_i = 0 for 0 < i <= 2^(k-1),
    `stiefel-whitney` checks w_i = 0 for 0 < i < 2^k.
    """
    if k < 1:
        raise InvalidInput("orientability level must be >= 1")
    if method not in METHODS:
        raise InvalidInput(f"unknown method {method!r}; expected one of {', '.join(METHODS)}")
    if assignment:
        p = p.specialise(assignment)
        table = None
    table = _table(p, table)
    ring = mod2_ring(p)
    n = p.dim
    found = _Collector()

    if method == "squares":
        for j in range(k):
            s = 1 << j
            if s > n:
                break
            for z in ring.degree_basis(n - s).basis:
                if found.add(top_square(z, s, p, table), Witness(n - s, s, z)):
                    break
            if found.witness:
                break
    else:
        top = (1 << (k - 1)) if method == "wu" else (1 << k) - 1
        top = min(top, n)
        if method == "wu":
            classes = [(i, wu_class(p, table, i).cls) for i in range(1, top + 1)]
        else:
            classes = list(enumerate(stiefel_whitney(p, table, upto=top)))[1:]
        for i, c in classes:
            for coefficient in ring.normal_form(c, degree=i):
                if found.add(coefficient, Witness(i, i, c)):
                    break
            if found.witness:
                break

    annotations = ("assume_smooth",) if p.assume_smooth else ()
    verdict = found.verdict(k, method, annotations, table.constraints())
    logger.debug("%s: k=%d by %s -> %s", p.name, k, method, verdict.status)
    return verdict


@dataclass(frozen=True)
class OrientabilityScan:
    """
    Verdicts for k = 1, 2, ... until the first level that is not an
    unconditional yes, the squares leave the table, or the dimension
    leaves nothing to check.
    """
    k: int
    stopped_by: str
    verdicts: Tuple[Verdict, ...] = ()
    missing: Optional[str] = None
    missing_level: Optional[int] = None


def levels(p: Presentation) -> int:
    """
    Largest level with something to check: 2^(k-1) <= n/2.
    """
    k = 0
    while (1 << k) * 2 <= p.dim:
        k += 1
    return k


def max_orientability(
    p: Presentation, table: Optional[SquareTable] = None, method: str = "squares"
) -> OrientabilityScan:
    table = _table(p, table)
    verdicts: List[Verdict] = []
    best = 0
    for k in range(1, levels(p) + 1):
        try:
            v = orientability_verdict(p, table, k, method)
        except TableIncomplete as exc:
            return OrientabilityScan(best, "missing", tuple(verdicts), exc.entry, k)
        verdicts.append(v)
        if v.status == YES:
            best = k
            continue
        return OrientabilityScan(best, "no" if v.status == NO else CONDITIONAL, tuple(verdicts))
    return OrientabilityScan(best, "dimension", tuple(verdicts))


@dataclass(frozen=True)
class ParityLevel:
    k: int
    chi_even: bool
    dim_divisible: bool

    @property
    def consistent(self) -> bool:
        return self.chi_even or self.dim_divisible


@dataclass(frozen=True)
class ParityCheck:
    """
    A k-orientable closed manifold whose dimension is not a multiple of
    2^(k+1) has even Euler characteristic.
    """
    chi: int
    dim: int
    levels: Tuple[ParityLevel, ...] = field(default=())
    limitation: Optional[str] = None

    @property
    def consistent(self) -> bool:
        return all(level.consistent for level in self.levels)

    @property
    def failures(self) -> List[int]:
        return [level.k for level in self.levels if not level.consistent]


def parity_theorem_check(
    p: Presentation, table: Optional[SquareTable] = None, scan: Optional[OrientabilityScan] = None
) -> ParityCheck:
    scan = scan or max_orientability(p, table)
    chi = euler_characteristic(p)
    out = []
    for k in range(0, scan.k + 1):
        out.append(ParityLevel(k, chi % 2 == 0, p.dim % (1 << (k + 1)) == 0))
    check = ParityCheck(chi, p.dim, tuple(out), scan.missing)
    if not check.consistent:
        logger.error("%s: parity check fails at k=%s (chi=%d, dim=%d)", p.name, check.failures, chi, p.dim)
    return check


# ---------- signature ----------

def intersection_form(p: Presentation) -> IntersectionForm:
    if p.mode is not Mode.INT:
        raise NotApplicable("the intersection form needs an integral presentation")
    if p.dim % 4:
        raise NotApplicable(f"dimension {p.dim} is not a multiple of 4")
    middle = p.dim // 2
    ring = graded_ring(p)
    basis = ring.degree_basis(middle)
    if basis.torsion:
        raise OddMiddleTorsion(f"middle degree {middle} has torsion {list(basis.torsion)}")
    return IntersectionForm(middle, ring.integral_pairing(middle))


def signature_of_form(matrix: Sequence[Sequence[int]]) -> int:
    """
    Signature by exact congruence diagonalisation over the rationals. A
    zero diagonal with a nonzero off-diagonal entry splits off a
    hyperbolic 2x2 block, which contributes 0.
    """
    A = [[Fraction(x) for x in row] for row in matrix]
    n = len(A)
    for i in range(n):
        if len(A[i]) != n:
            raise InvalidInput("intersection form must be square")
        for j in range(i):
            if A[i][j] != A[j][i]:
                raise InvalidInput("intersection form must be symmetric")

    signature = 0
    while A:
        m = len(A)
        piv = next((i for i in range(m) if A[i][i] != 0), None)
        if piv is not None:
            A = _swap(A, 0, piv)
            d = A[0][0]
            signature += 1 if d > 0 else -1
            A = [[A[i][j] - A[i][0] * A[0][j] / d for j in range(1, m)] for i in range(1, m)]
            continue
        partner = next((j for j in range(1, m) if A[0][j] != 0), None)
        if partner is None:
            A = [row[1:] for row in A[1:]]
            continue
        A = _swap(A, 1, partner)
        b = A[0][1]
        A = [
            [A[i][j] - (A[i][0] * A[1][j] + A[i][1] * A[0][j]) / b for j in range(2, m)]
            for i in range(2, m)
        ]
    return signature


def _swap(A: List[List[Fraction]], i: int, j: int) -> List[List[Fraction]]:
    if i == j:
        return A
    A = [row[:] for row in A]
    A[i], A[j] = A[j], A[i]
    for row in A:
        row[i], row[j] = row[j], row[i]
    return A


def signature(p: Presentation) -> int:
    form = intersection_form(p)
    return signature_of_form(form.matrix)

