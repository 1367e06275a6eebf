from __future__ import annotations

import threading
from dataclasses import dataclass
from functools import lru_cache
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from .. import config
from ..log import get_logger
from . import gf2
from .errors import (
    DegeneratePairing,
    DimensionOverflow,
    InhomogeneousInput,
    InvalidInput,
    NotPoincare,
    TorsionPresent,
)
from .poly import (
    INTEGERS,
    ClassPoly,
    Domain,
    GeneratorTable,
    Mode,
    Monomial,
    ParamDomain,
    ParamPoly,
    coefficient_bit,
)
from .presentation import Presentation, reduce_coefficients_mod2
from .smith import hermite_columns, matmul, smith_normal_form

logger = get_logger(__name__)

Coordinates = Tuple[Any, ...]


@dataclass(frozen=True)
class DegreeBasis:
    """
    One degree of the quotient ring.

    `reduce` sends every monomial of the degree to its coordinates: over
    GF(2) a 0/1 vector on `basis`; over Z the free coordinates followed by
    one residue per torsion factor.
    """
    degree: int
    monomials: Tuple[Monomial, ...]
    basis: Tuple[ClassPoly, ...]
    standard: Tuple[Monomial, ...]
    reduce: Dict[Monomial, Tuple[int, ...]]
    torsion: Tuple[int, ...] = ()
    relation_rank: int = 0

    @property
    def rank(self) -> int:
        return len(self.basis)

    def coordinates(self, m: Monomial) -> Tuple[int, ...]:
        return self.reduce[tuple(m)]


@dataclass(frozen=True)
class PairingMatrix:
    degree: int
    matrix: Tuple[Tuple[int, ...], ...]

    def as_array(self) -> np.ndarray:
        rows = len(self.matrix)
        cols = len(self.matrix[0]) if rows else 0
        return gf2.as_matrix(self.matrix, cols)


class GradedRing:
    """
    Lazily computed, memoised per-degree structure of a presented ring.
    Degrees are independent once their monomial lists exist; the lock
    only guards the memo tables.
    """

    def __init__(self, p: Presentation):
        self.p = p
        self.gens: GeneratorTable = p.gens
        self.domain = p.domain
        self._monomials: Dict[int, Tuple[Monomial, ...]] = {0: (p.gens.unit,)}
        self._bases: Dict[int, DegreeBasis] = {}
        self._lock = threading.RLock()

    # ----- monomials and relations -----

    def monomials(self, d: int) -> Tuple[Monomial, ...]:
        if d < 0:
            return ()
        with self._lock:
            if d in self._monomials:
                return self._monomials[d]
            top = max(self._monomials)
            for k in range(top + 1, d + 1):
                found = set()
                for i, gd in enumerate(self.gens.degrees):
                    if gd > k:
                        continue
                    for m in self._monomials[k - gd]:
                        found.add(m[:i] + (m[i] + 1,) + m[i + 1:])
                self._monomials[k] = tuple(sorted(found, key=self.gens.order_key))
            return self._monomials[d]

    def relation_slice(self, d: int) -> List[ClassPoly]:
        """
        Distinct products r*m of degree d, in first-seen order.
        """
        out: Dict[ClassPoly, None] = {}
        for r in self.p.relations:
            e = r.degree()
            if e is None or e > d:
                continue
            for m in self.monomials(d - e):
                product = r * ClassPoly.monomial(self.gens, r.domain, m)
                if not product.is_zero():
                    out.setdefault(product, None)
        return list(out)

    # ----- bases -----

    def degree_basis(self, d: int, *, check_dim: bool = True) -> DegreeBasis:
        if d < 0 or (check_dim and d > self.p.dim):
            raise DimensionOverflow(f"degree {d} is outside 0..{self.p.dim}")
        with self._lock:
            cached = self._bases.get(d)
            if cached is not None:
                return cached
        if self.p.mode is Mode.INT:
            result = self._integral_basis(d)
        else:
            result = self._mod2_basis(d)
        logger.debug(
            "%s degree %d: %d monomials, relation rank %d, basis %d%s",
            self.p.name, d, len(result.monomials), result.relation_rank, result.rank,
            f", torsion {list(result.torsion)}" if result.torsion else "",
        )
        with self._lock:
            return self._bases.setdefault(d, result)

    def _mod2_basis(self, d: int) -> DegreeBasis:
        monos = self.monomials(d)
        # largest monomial first so that pivots are leading terms
        columns = list(reversed(monos))
        col_index = {m: j for j, m in enumerate(columns)}
        rows = self.relation_slice(d)
        M = np.zeros((len(rows), len(columns)), dtype=np.uint8)
        for i, r in enumerate(rows):
            for m, c in r.terms():
                M[i, col_index[m]] = coefficient_bit(c)
        R, pivots = gf2.rref(M)
        pivot_set = set(pivots)
        standard = tuple(columns[j] for j in reversed(range(len(columns))) if j not in pivot_set)
        std_cols = [col_index[s] for s in standard]

        reduce: Dict[Monomial, Tuple[int, ...]] = {}
        for k, s in enumerate(standard):
            reduce[s] = tuple(1 if i == k else 0 for i in range(len(standard)))
        for row, pc in enumerate(pivots):
            reduce[columns[pc]] = tuple(int(R[row, j]) for j in std_cols)

        return DegreeBasis(
            degree=d,
            monomials=monos,
            basis=tuple(ClassPoly.monomial(self.gens, self.domain, s) for s in standard),
            standard=standard,
            reduce=reduce,
            relation_rank=len(pivots),
        )

    def _integral_basis(self, d: int) -> DegreeBasis:
        monos = self.monomials(d)
        m = len(monos)
        col_index = {mono: j for j, mono in enumerate(monos)}
        rows = []
        for r in self.relation_slice(d):
            row = [0] * m
            for mono, c in r.terms():
                row[col_index[mono]] = c
            rows.append(row)

        snf = smith_normal_form(rows, cols=m)
        rank = snf.rank
        free = m - rank
        V, Vi = snf.right, snf.right_inverse

        # canonical free coordinates: column Hermite form over grevlex rows
        herm = hermite_columns([V[j][rank:] for j in range(m)], cols=free)
        representatives = matmul(herm.W_inverse, [Vi[k] for k in range(rank, m)]) if free else []
        torsion_slots = [(k, dk) for k, dk in enumerate(snf.diagonal) if dk > 1]

        reduce: Dict[Monomial, Tuple[int, ...]] = {}
        for j, mono in enumerate(monos):
            reduce[mono] = tuple(herm.H[j]) + tuple(V[j][k] % dk for k, dk in torsion_slots)

        basis = tuple(
            ClassPoly(self.gens, INTEGERS, {monos[j]: representatives[k][j] for j in range(m)})
            for k in range(free)
        )
        return DegreeBasis(
            degree=d,
            monomials=monos,
            basis=basis,
            standard=(),
            reduce=reduce,
            torsion=tuple(dk for _, dk in torsion_slots),
            relation_rank=rank,
        )

    # ----- coordinates -----

    def normal_form(self, c: ClassPoly, degree: Optional[int] = None) -> Coordinates:
        if c.gens != self.gens:
            raise InvalidInput("class and presentation use different generators")
        d = c.degree()
        if d is None:
            if degree is None:
                raise InhomogeneousInput("the zero class needs an explicit degree")
            d = degree
        elif degree is not None and degree != d:
            raise InhomogeneousInput(f"class has degree {d}, expected {degree}")
        basis = self.degree_basis(d)

        if self.p.mode is Mode.INT:
            if c.domain != INTEGERS:
                raise InvalidInput("integral presentation needs integer coefficients")
            free = basis.rank
            coords = [0] * (free + len(basis.torsion))
            for mono, coef in c.terms():
                vec = basis.reduce[mono]
                for k, v in enumerate(vec):
                    if v:
                        coords[k] += coef * v
            for t, dk in enumerate(basis.torsion):
                coords[free + t] %= dk
            return tuple(coords)

        dom = c.domain
        if dom.characteristic != 2:
            raise InvalidInput("mod-2 presentation needs mod-2 coefficients")
        coords = [dom.zero] * basis.rank
        for mono, coef in c.terms():
            for k, bit in enumerate(basis.reduce[mono]):
                if bit:
                    coords[k] = dom.add(coords[k], coef)
        return tuple(coords)

    def coordinates_to_class(self, d: int, coords: Sequence[Any]) -> ClassPoly:
        basis = self.degree_basis(d)
        if len(coords) < basis.rank:
            raise InvalidInput(f"degree {d} needs {basis.rank} coordinates, got {len(coords)}")
        dom = _coordinate_domain(coords, self.domain)
        total = ClassPoly.zero(self.gens, dom)
        for rep, coef in zip(basis.basis, coords):
            total = total + rep.to_domain(dom).scale(coef)
        return total

    # ----- duality -----

    def betti_profile(self) -> Tuple[int, ...]:
        if self.p.mode is Mode.INT:
            raise InvalidInput("Betti numbers are taken over GF(2); reduce the presentation first")
        n = self.p.dim
        betti = tuple(self.degree_basis(d).rank for d in range(n + 1))
        if betti[n] != 1:
            raise NotPoincare(f"top degree {n} has dimension {betti[n]}, expected 1")
        for i in range(n + 1):
            if betti[i] != betti[n - i]:
                raise NotPoincare(f"b_{i} = {betti[i]} but b_{n - i} = {betti[n - i]}")
        return betti

    def top_coordinate(self, c: ClassPoly) -> Any:
        coords = self.normal_form(c, degree=self.p.dim)
        if len(coords) != 1:
            raise NotPoincare(f"top degree {self.p.dim} is not one-dimensional")
        return coords[0]

    def pairing(self, i: int) -> PairingMatrix:
        n = self.p.dim
        if not 0 <= i <= n:
            raise DimensionOverflow(f"degree {i} is outside 0..{n}")
        if self.p.mode is Mode.INT:
            raise InvalidInput("the mod-2 pairing needs a mod-2 presentation")
        if self.degree_basis(n).rank != 1:
            raise NotPoincare(f"top degree {n} is not one-dimensional")
        left = self.degree_basis(i).basis
        right = self.degree_basis(n - i).basis
        matrix = tuple(
            tuple(coefficient_bit(self.top_coordinate(a * b)) for b in right) for a in left
        )
        result = PairingMatrix(degree=i, matrix=matrix)
        if len(left) != len(right) or gf2.rank(result.as_array()) != len(left):
            raise DegeneratePairing(f"cup pairing between degrees {i} and {n - i} is degenerate")
        return result

    def integral_pairing(self, i: int) -> Tuple[Tuple[int, ...], ...]:
        if self.p.mode is not Mode.INT:
            raise InvalidInput("the integral pairing needs an integral presentation")
        top = self.degree_basis(self.p.dim)
        if top.rank != 1 or top.torsion:
            raise NotPoincare(f"top degree {self.p.dim} is not Z")
        left = self.degree_basis(i).basis
        right = self.degree_basis(self.p.dim - i).basis
        return tuple(tuple(self.normal_form(a * b, degree=self.p.dim)[0] for b in right) for a in left)


def _coordinate_domain(coords: Sequence[Any], fallback: Domain) -> Domain:
    for c in coords:
        if isinstance(c, ParamPoly):
            return ParamDomain(c.names)
    return fallback


@lru_cache(maxsize=64)
def graded_ring(p: Presentation) -> GradedRing:
    return GradedRing(p)


def mod2_ring(p: Presentation) -> GradedRing:
    """
    The ring whose bases carry Steenrod computations: p itself in mod-2
    modes, its validated reduction for integral presentations.
    """
    if p.mode is Mode.INT:
        return graded_ring(mod2_reduce(p))
    return graded_ring(p)


# ---------- module-level operations ----------

def enumerate_monomials(p: Presentation, d: int) -> List[Monomial]:
    if not 0 <= d <= p.dim:
        raise DimensionOverflow(f"degree {d} is outside 0..{p.dim}")
    return list(graded_ring(p).monomials(d))


def relation_slice(p: Presentation, d: int) -> List[ClassPoly]:
    return graded_ring(p).relation_slice(d)


def degree_basis(p: Presentation, d: int) -> DegreeBasis:
    return graded_ring(p).degree_basis(d)


def normal_form(p: Presentation, c: ClassPoly, degree: Optional[int] = None) -> Coordinates:
    return graded_ring(p).normal_form(c, degree)


def coordinates_to_class(p: Presentation, d: int, coords: Sequence[Any]) -> ClassPoly:
    return graded_ring(p).coordinates_to_class(d, coords)


def betti_profile(p: Presentation) -> Tuple[int, ...]:
    return mod2_ring(p).betti_profile()


def pairing(p: Presentation, i: int) -> PairingMatrix:
    return mod2_ring(p).pairing(i)


@lru_cache(maxsize=64)
def mod2_reduce(p: Presentation) -> Presentation:
    """
    Reduce an integral presentation mod 2, refusing when torsion or odd
    classes would make the reduction formula wrong.
    """
    if p.mode is not Mode.INT:
        raise InvalidInput(f"{p.name} is already a mod-2 presentation")
    ring = graded_ring(p)
    for d in range(p.dim + 1):
        b = ring.degree_basis(d)
        if b.torsion:
            raise TorsionPresent(f"degree {d} has torsion {list(b.torsion)}")
        if d % 2 and b.rank:
            raise TorsionPresent(f"degree {d} is nonzero; mod-2 reduction needs even-degree cohomology")
    return reduce_coefficients_mod2(p)


def validation_slack(p: Presentation) -> int:
    if config.VALIDATE_SLACK:
        return int(config.VALIDATE_SLACK)
    return max(p.gens.degrees)


def validate_presentation(p: Presentation) -> Tuple[int, ...]:
    """
    Check that p presents a Poincare duality algebra of dimension p.dim:
    vanishing above the top, one-dimensional top, symmetric Betti
    numbers and invertible pairings. Returns the Betti profile.
    """
    ring = graded_ring(p)
    for d in range(p.dim + 1, p.dim + validation_slack(p) + 1):
        b = ring.degree_basis(d, check_dim=False)
        if b.rank or b.torsion:
            raise NotPoincare(f"degree {d} above the dimension {p.dim} is nonzero")
    work = mod2_ring(p)
    betti = work.betti_profile()
    for i in range(p.dim // 2 + 1):
        work.pairing(i)
    if p.mode is Mode.INT:
        for d in range(p.dim + 1):
            if ring.degree_basis(d).rank != betti[d]:
                raise NotPoincare(f"integral rank and mod-2 Betti number differ in degree {d}")
    return betti
