from __future__ import annotations

import threading
from dataclasses import dataclass
from functools import lru_cache
from typing import Any, Dict, FrozenSet, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from ..log import get_logger
from . import gf2
from .basis import Coordinates, GradedRing, mod2_ring
from .conditions import ParamIdeal
from .errors import (
    DegreeOverflow,
    DomainMismatch,
    InvalidInput,
    MissingEntry,
    TableIncomplete,
    UnderdeterminedEntry,
)
from .poly import ClassPoly, Monomial, coefficient_bit
from .presentation import Presentation, is_power_of_two

logger = get_logger(__name__)

AXIOM = "axiom"
USER = "user"
ADEM = "adem"
FORCED = "forced"
MISSING = "missing"


def binomial_mod2(n: int, k: int) -> int:
    """
    C(n, k) mod 2 by Lucas: odd iff every bit of k is a bit of n.
    """
    if k < 0 or n < 0 or k > n:
        return 0
    return 1 if k & ~n == 0 else 0


# ---------- Adem decomposition ----------

@dataclass(frozen=True)
class AdemWord:
    """
    Sq^k written as a GF(2) sum of composites of power-of-two squares.
    Each composite lists its letters outermost first.
    """
    k: int
    composites: Tuple[Tuple[int, ...], ...]

    def render(self) -> str:
        if not self.composites:
            return "0"
        return " + ".join(" ".join(f"Sq^{a}" for a in c) for c in self.composites)

    def evaluate(self, c: ClassPoly, table: SquareTable) -> ClassPoly:
        total = ClassPoly.zero(table.gens, table.domain)
        for composite in self.composites:
            x = c
            for letter in reversed(composite):
                x = table.sq_polynomial(x, letter)
                if x.is_zero():
                    break
            total = total + x
        return total


def _compose(outer: FrozenSet[Tuple[int, ...]], inner: FrozenSet[Tuple[int, ...]]) -> FrozenSet[Tuple[int, ...]]:
    out: set = set()
    for a in outer:
        for b in inner:
            out ^= {a + b}
    return frozenset(out)


@lru_cache(maxsize=None)
def _expand(k: int) -> FrozenSet[Tuple[int, ...]]:
    if k == 0:
        return frozenset({()})
    if is_power_of_two(k):
        return frozenset({(k,)})
    b = 1 << (k.bit_length() - 1)
    a = k - b
    # Sq^a Sq^b = Sq^k + sum_{c>=1} C(b-c-1, a-2c) Sq^(k-c) Sq^c, and C(b-1, a) is odd
    words = set(_compose(_expand(a), _expand(b)))
    for c in range(1, a // 2 + 1):
        if binomial_mod2(b - c - 1, a - 2 * c):
            words ^= _compose(_expand(k - c), _expand(c))
    return frozenset(words)


def adem_decompose(k: int) -> AdemWord:
    if k < 1:
        raise InvalidInput("Adem decomposition needs k >= 1")
    return AdemWord(k=k, composites=tuple(sorted(_expand(k), key=lambda w: (len(w), w))))


# ---------- compositions ----------

def compositions(n: int, k: int, bounds: Optional[Sequence[int]] = None) -> Iterator[Tuple[int, ...]]:
    """
    Weak compositions of n into k parts in lexicographic order, optionally
    with an upper bound per part.
    """
    if n < 0 or k < 1:
        raise InvalidInput("compositions need n >= 0 and k >= 1")
    caps = list(bounds) if bounds is not None else [n] * k
    if len(caps) != k:
        raise InvalidInput("one bound per part")
    room = [0] * (k + 1)
    for j in reversed(range(k)):
        room[j] = room[j + 1] + caps[j]
    if n > room[0]:
        return

    def walk(j: int, left: int, prefix: Tuple[int, ...]) -> Iterator[Tuple[int, ...]]:
        if j == k - 1:
            yield prefix + (left,)
            return
        for v in range(max(0, left - room[j + 1]), min(caps[j], left) + 1):
            yield from walk(j + 1, left - v, prefix + (v,))

    yield from walk(0, n, ())


# ---------- the table ----------

@dataclass(frozen=True)
class TableEntry:
    generator: str
    index: int
    value: Optional[ClassPoly]
    provenance: str
    missing: Optional[str] = None


class SquareTable:
    """
    Sq^i on every generator for 0 <= i <= deg g, with provenance, plus
    memoised Cartan evaluation on polynomials. Values are representatives
    in the free polynomial ring; reduction happens in `sq`.
    """

    def __init__(self, p: Presentation):
        self.presentation = p
        self.gens = p.gens
        self.domain = p.square_domain
        self._entries: Dict[Tuple[int, int], TableEntry] = {}
        self._powers: Dict[Tuple[int, int, int], ClassPoly] = {}
        self._monomials: Dict[Tuple[Monomial, int], ClassPoly] = {}
        self._constraints: Optional[ParamIdeal] = None
        self._lock = threading.RLock()
        self._zero = ClassPoly.zero(self.gens, self.domain)
        self._one = ClassPoly.one(self.gens, self.domain)

    # ----- entries -----

    def _set(self, gi: int, i: int, value: Optional[ClassPoly], provenance: str, missing: Optional[str] = None):
        name = self.gens.names[gi]
        self._entries[(gi, i)] = TableEntry(name, i, value, provenance, missing)
        logger.debug("Sq^%d %s: %s (%s)", i, name, value if value is not None else missing, provenance)

    def has(self, gi: int, i: int) -> bool:
        return (gi, i) in self._entries

    def entry(self, generator: str | int, i: int) -> TableEntry:
        gi = generator if isinstance(generator, int) else self.gens.index(generator)
        deg = self.gens.degrees[gi]
        if i > deg:
            return TableEntry(self.gens.names[gi], i, self._zero, AXIOM)
        try:
            return self._entries[(gi, i)]
        except KeyError:
            return TableEntry(self.gens.names[gi], i, None, MISSING, f"Sq^{i} {self.gens.names[gi]}")

    def value(self, generator: str | int, i: int) -> ClassPoly:
        e = self.entry(generator, i)
        if e.value is None:
            raise TableIncomplete(e.missing)
        return e.value

    def entries(self) -> List[TableEntry]:
        return [self._entries[key] for key in sorted(self._entries)]

    def missing(self) -> List[str]:
        return sorted({e.missing for e in self._entries.values() if e.missing}, key=_entry_order)

    def constraints(self) -> ParamIdeal:
        """
        Parameter conditions under which the table satisfies the Adem
        relations. Tables without parameters give the zero ideal.
        """
        with self._lock:
            if self._constraints is not None:
                return self._constraints
        names = self.domain.parameters
        residues = adem_residues(self) if names else []
        ideal = ParamIdeal(names, [x for r in residues for x in r.coordinates])
        if ideal.is_unit:
            logger.warning("%s: no parameter choice satisfies the Adem relations", self.presentation.name)
        elif ideal:
            logger.info(
                "%s: Adem relations need %s", self.presentation.name, ", ".join(f"{g} = 0" for g in ideal.generators)
            )
        with self._lock:
            self._constraints = ideal
        return ideal

    # ----- Cartan evaluation -----

    def power_square(self, gi: int, e: int, n: int) -> ClassPoly:
        """
        Degree (e*deg g + n) part of (Sq g)^e. The binary digits of e split
        the power into Frobenius images, so only sum_b i_b 2^b = n remains.
        """
        if e < 1:
            raise InvalidInput("power must be >= 1")
        deg = self.gens.degrees[gi]
        if n < 0 or n > e * deg:
            return self._zero
        key = (gi, e, n)
        with self._lock:
            hit = self._powers.get(key)
        if hit is not None:
            return hit

        bits = [b for b in range(e.bit_length()) if e >> b & 1]
        rest = [0] * (len(bits) + 1)
        for j in reversed(range(len(bits))):
            rest[j] = rest[j + 1] + deg * (1 << bits[j])

        def walk(j: int, left: int, acc: ClassPoly) -> ClassPoly:
            if j == len(bits):
                return acc if left == 0 else self._zero
            step = 1 << bits[j]
            total = self._zero
            for i in range(deg + 1):
                used = i * step
                if used > left:
                    break
                if left - used > rest[j + 1]:
                    continue
                factor = self.value(gi, i)
                if factor.is_zero():
                    continue
                total = total + walk(j + 1, left - used, acc * factor.frobenius(bits[j]))
            return total

        result = walk(0, n, self._one)
        with self._lock:
            self._powers[key] = result
        return result

    def monomial_square(self, m: Monomial, n: int) -> ClassPoly:
        key = (m, n)
        with self._lock:
            hit = self._monomials.get(key)
        if hit is not None:
            return hit
        slots = [(gi, e) for gi, e in enumerate(m) if e]
        if not slots:
            result = self._one if n == 0 else self._zero
        else:
            caps = [e * self.gens.degrees[gi] for gi, e in slots]
            result = self._zero
            for parts in compositions(n, len(slots), caps):
                acc = self._one
                for (gi, e), part in zip(slots, parts):
                    factor = self.power_square(gi, e, part)
                    if factor.is_zero():
                        acc = self._zero
                        break
                    acc = acc * factor
                result = result + acc
        with self._lock:
            self._monomials[key] = result
        return result

    def sq_polynomial(self, c: ClassPoly, n: int) -> ClassPoly:
        c = self._coerce(c)
        total = self._zero
        for m, coef in c.terms():
            total = total + self.monomial_square(m, n).scale(coef)
        return total

    def sq_naive(self, c: ClassPoly, n: int) -> ClassPoly:
        c = self._coerce(c)
        total = self._zero
        for m, coef in c.terms():
            factors = [gi for gi, e in enumerate(m) for _ in range(e)]
            if not factors:
                if n == 0:
                    total = total + ClassPoly.constant(self.gens, self.domain, coef)
                continue
            caps = [self.gens.degrees[gi] for gi in factors]
            for parts in compositions(n, len(factors), caps):
                acc = ClassPoly.constant(self.gens, self.domain, coef)
                for gi, part in zip(factors, parts):
                    acc = acc * self.value(gi, part)
                total = total + acc
        return total

    def _coerce(self, c: ClassPoly) -> ClassPoly:
        if c.gens != self.gens:
            raise InvalidInput("class and table use different generators")
        try:
            return c.to_domain(self.domain)
        except DomainMismatch as exc:
            raise DomainMismatch(f"cannot apply squares to {c}: {exc}") from None


def _entry_order(name: str) -> Tuple[int, str]:
    index, _, generator = name[3:].partition(" ")
    return int(index), generator


# ---------- completion ----------

def complete_table(p: Presentation, strict: bool = False) -> SquareTable:
    """
    Fill Sq^i g for all 0 <= i <= deg g. Unstability gives the ends, the
    presentation gives powers of two, the Sq^1 consistency rule forces a
    few more, and Adem words fill the rest in increasing index. Gaps are
    recorded; strict mode raises MissingEntry on the first one.
    """
    return _complete_table(p, strict)


@lru_cache(maxsize=32)
def _complete_table(p: Presentation, strict: bool) -> SquareTable:
    table = SquareTable(p)
    gens, dim, dom = p.gens, p.dim, table.domain
    user = {(gens.index(g), i): v for (g, i), v in p.squares}

    for gi, deg in enumerate(gens.degrees):
        g = ClassPoly.generator(gens, dom, gens.names[gi])
        table._set(gi, 0, g, AXIOM)
        square = g * g if 2 * deg <= dim else ClassPoly.zero(gens, dom)
        given = user.get((gi, deg))
        if given is not None and given != square and not _same_class(p, given, square, 2 * deg):
            raise InvalidInput(f"Sq^{deg} {gens.names[gi]} must be {gens.names[gi]}^2")
        table._set(gi, deg, square, AXIOM)
        for i in range(1, deg):
            if deg + i > dim:
                table._set(gi, i, ClassPoly.zero(gens, dom), AXIOM)
            elif is_power_of_two(i) and (gi, i) in user:
                table._set(gi, i, user[(gi, i)], USER)

    _force_entries(table, p)

    for gi, deg in enumerate(gens.degrees):
        for i in range(1, deg):
            if is_power_of_two(i) and not table.has(gi, i):
                root = f"Sq^{i} {gens.names[gi]}"
                if strict:
                    raise MissingEntry(root)
                table._set(gi, i, None, MISSING, root)

    top = max(gens.degrees)
    for i in range(3, top):
        if is_power_of_two(i):
            continue
        word = adem_decompose(i)
        for gi, deg in enumerate(gens.degrees):
            if i >= deg or table.has(gi, i):
                continue
            g = ClassPoly.generator(gens, dom, gens.names[gi])
            try:
                table._set(gi, i, word.evaluate(g, table), ADEM)
            except TableIncomplete as exc:
                table._set(gi, i, None, MISSING, exc.entry)

    gaps = table.missing()
    if gaps:
        logger.info("%s: Steenrod table incomplete, missing %s", p.name, ", ".join(gaps))
    return table


def _same_class(p: Presentation, a: ClassPoly, b: ClassPoly, degree: int) -> bool:
    if degree > p.dim:
        return True
    ring = mod2_ring(p)
    return ring.normal_form(a, degree) == ring.normal_form(b.to_domain(a.domain), degree)


def _sq1_sources(table: SquareTable, p: Presentation) -> List[int]:
    """
    Generators h that are declared as Sq^1 of another generator.
    """
    found = []
    for (g, i), v in p.squares:
        if i != 1 or len(v) != 1:
            continue
        (m, c), = v.terms()
        if sum(m) == 1 and table.domain.is_one(c):
            found.append(m.index(1))
    return sorted(set(found))


def _force_entries(table: SquareTable, p: Presentation) -> None:
    gens = p.gens
    for hi in _sq1_sources(table, p):
        deg = gens.degrees[hi]
        if not table.has(hi, 1):
            # Sq^1 Sq^1 = 0
            table._set(hi, 1, ClassPoly.zero(gens, table.domain), FORCED)
        for s in range(2, deg):
            if not is_power_of_two(s) or s + 1 < deg or table.has(hi, s):
                continue
            try:
                value = _solve_sq1_preimage(table, p, hi, s)
            except TableIncomplete:
                continue
            table._set(hi, s, value, FORCED)


def _solve_sq1_preimage(table: SquareTable, p: Presentation, hi: int, s: int) -> ClassPoly:
    """
    Sq^1 Sq^s = Sq^(s+1) for even s, so Sq^s h is the unique x in degree
    deg h + s with Sq^1 x = Sq^(s+1) h, when Sq^1 is injective there.
    """
    ring: GradedRing = mod2_ring(p)
    name = f"Sq^{s} {p.gens.names[hi]}"
    src_deg = p.gens.degrees[hi] + s
    source = ring.degree_basis(src_deg)
    if src_deg + 1 > p.dim:
        if source.rank:
            raise UnderdeterminedEntry(f"{name}: Sq^1 vanishes on degree {src_deg}")
        return ClassPoly.zero(p.gens, table.domain)

    try:
        columns = [
            [coefficient_bit(x) for x in ring.normal_form(table.sq_polynomial(b, 1), src_deg + 1)]
            for b in source.basis
        ]
        rhs = [coefficient_bit(x) for x in ring.normal_form(table.value(hi, s + 1), src_deg + 1)]
    except DomainMismatch:
        raise UnderdeterminedEntry(f"{name}: Sq^1 depends on parameters in degree {src_deg}") from None

    target_rank = ring.degree_basis(src_deg + 1).rank
    M = np.zeros((target_rank, source.rank), dtype=np.uint8)
    for k, col in enumerate(columns):
        M[:, k] = col
    L = gf2.left_inverse(M)
    if L is None:
        raise UnderdeterminedEntry(f"{name}: Sq^1 is not injective on degree {src_deg}")
    b = np.asarray(rhs, dtype=np.uint8).reshape(-1, 1)
    x = gf2.matmul(L, b)
    if not np.array_equal(gf2.matmul(M, x), b):
        raise UnderdeterminedEntry(f"{name}: Sq^1 x = Sq^{s + 1} {p.gens.names[hi]} has no solution")

    value = ClassPoly.zero(p.gens, table.domain)
    for k, bit in enumerate(x[:, 0]):
        if bit:
            value = value + source.basis[k].to_domain(table.domain)
    return value


# ---------- Adem consistency ----------

@dataclass(frozen=True)
class AdemResidue:
    """
    Sq^a Sq^b g plus its Adem expansion, as coordinates in degree
    deg g + a + b. A consistent table leaves every residue zero.
    """
    generator: str
    a: int
    b: int
    degree: int
    coordinates: Coordinates

    def render(self) -> str:
        return f"Sq^{self.a} Sq^{self.b} {self.generator}"


def adem_residues(table: SquareTable) -> List[AdemResidue]:
    """
    Nonzero residues of Sq^a Sq^b g = sum_c C(b-c-1, a-2c) Sq^(a+b-c) Sq^c g
    over every generator g and 0 < a < 2b with b <= deg g, up to the top
    degree. Relations that reach a missing entry are skipped.
    """
    p = table.presentation
    ring = mod2_ring(p)
    dom = table.domain
    out: List[AdemResidue] = []
    skipped = 0
    for gi, deg in enumerate(p.gens.degrees):
        for b in range(1, deg + 1):
            for a in range(1, 2 * b):
                d = deg + a + b
                if d > p.dim:
                    break
                try:
                    residue = table.sq_polynomial(table.value(gi, b), a)
                    for c in range(0, a // 2 + 1):
                        if binomial_mod2(b - c - 1, a - 2 * c):
                            residue = residue + table.sq_polynomial(table.value(gi, c), a + b - c)
                except TableIncomplete:
                    skipped += 1
                    continue
                coords = ring.normal_form(residue, d)
                if any(not dom.is_zero(x) for x in coords):
                    out.append(AdemResidue(p.gens.names[gi], a, b, d, coords))
    if skipped:
        logger.info("%s: %d Adem relations skipped at table gaps", p.name, skipped)
    return out


def adem_constraints(p: Presentation, table: Optional[SquareTable] = None) -> ParamIdeal:
    return (table or complete_table(p)).constraints()


# ---------- evaluation ----------

def sq_power(g: str | int, e: int, n: int, table: SquareTable) -> ClassPoly:
    gi = g if isinstance(g, int) else table.gens.index(g)
    return table.power_square(gi, e, n)


def sq_polynomial(c: ClassPoly, n: int, table: SquareTable) -> ClassPoly:
    return table.sq_polynomial(c, n)


def sq_naive(c: ClassPoly, n: int, table: SquareTable) -> ClassPoly:
    return table.sq_naive(c, n)


def sq(
    c: ClassPoly,
    n: int,
    p: Presentation,
    table: Optional[SquareTable] = None,
    degree: Optional[int] = None,
) -> Coordinates:
    """
    Coordinates of Sq^n c in degree deg c + n of the mod-2 ring.
    """
    if n < 0:
        raise InvalidInput("square index must be >= 0")
    table = table or complete_table(p)
    d = c.degree()
    if d is None:
        if degree is None:
            raise InvalidInput("the zero class needs an explicit degree")
        d = degree
    if d + n > p.dim:
        raise DegreeOverflow(f"Sq^{n} of a degree-{d} class lands in degree {d + n} > {p.dim}")
    ring = mod2_ring(p)
    return ring.normal_form(table.sq_polynomial(c, n), d + n)


def total_square(c: ClassPoly, p: Presentation, table: Optional[SquareTable] = None) -> Dict[int, Coordinates]:
    """
    Sq(c) = sum_n Sq^n c as coordinates per degree, up to the top.
    """
    table = table or complete_table(p)
    d = c.degree()
    if d is None:
        return {}
    return {d + n: sq(c, n, p, table) for n in range(0, min(d, p.dim - d) + 1)}


def top_square(c: ClassPoly, n: int, p: Presentation, table: Optional[SquareTable] = None) -> Any:
    """
    Coefficient of Sq^n c on the top class; c must have degree dim - n.
    """
    table = table or complete_table(p)
    coords = sq(c, n, p, table, degree=p.dim - n)
    return coords[0] if coords else table.domain.zero
