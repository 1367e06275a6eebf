from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Dict, Iterable, List, Mapping, Optional, Tuple

from ..log import get_logger
from .errors import InhomogeneousRelation, InvalidAssignment, InvalidInput
from .expr import parse_expr
from .poly import (
    ClassPoly,
    Domain,
    GeneratorTable,
    Mode,
    ParamDomain,
    coefficient_bit,
    domain_for,
    square_domain,
)

logger = get_logger(__name__)

SquareKey = Tuple[str, int]


def is_power_of_two(n: int) -> bool:
    return n >= 1 and n & (n - 1) == 0


@dataclass(frozen=True)
class Presentation:
    """
    Generators, homogeneous relations and a formal dimension, plus the
    user-supplied Steenrod squares Sq^(2^j) on generators.

    Relations live in the presentation domain (GF(2) or integers; the
    parametric mode keeps parameter-free relations over ParamPoly).
    Steenrod values always live in the mod-2 square domain.
    """
    name: str
    gens: GeneratorTable
    relations: Tuple[ClassPoly, ...]
    dim: int
    mode: Mode
    params: Tuple[str, ...] = ()
    squares: Tuple[Tuple[SquareKey, ClassPoly], ...] = ()
    assume_smooth: bool = False
    instantiations: Tuple[Tuple[str, Tuple[Tuple[str, int], ...]], ...] = field(default=(), compare=False)

    @property
    def domain(self) -> Domain:
        return domain_for(self.mode, self.params)

    @property
    def square_domain(self) -> Domain:
        return square_domain(self.params)

    def square(self, generator: str, i: int) -> Optional[ClassPoly]:
        for key, value in self.squares:
            if key == (generator, i):
                return value
        return None

    def relation_degrees(self) -> List[int]:
        return sorted(r.degree() for r in self.relations)

    def instantiation(self, name: str) -> Dict[str, int]:
        for key, assignment in self.instantiations:
            if key == name:
                return dict(assignment)
        raise InvalidInput(f"{self.name} has no instantiation named {name!r}")

    def parse(self, text: str) -> ClassPoly:
        """
        Parse a class in the presentation domain.
        """
        return parse_expr(text, self.gens, self.domain)

    def parse_square(self, text: str) -> ClassPoly:
        return parse_expr(text, self.gens, self.square_domain)

    def specialise(self, assignment: Mapping[str, int]) -> Presentation:
        """
        Substitute parameter values into the Steenrod table. Fully
        assigned parametric presentations drop back to plain GF(2).
        """
        if not assignment:
            return self
        unknown = set(assignment) - set(self.params)
        if unknown:
            raise InvalidAssignment(f"{self.name} has no parameter(s) {sorted(unknown)}")
        squares = tuple((k, v.substitute(assignment)) for k, v in self.squares)
        remaining = tuple(p for p in self.params if p not in assignment)
        if remaining == self.params:
            return self
        target = square_domain(remaining)
        squares = tuple((k, v.to_domain(target)) for k, v in squares)
        mode = self.mode
        relations = self.relations
        if mode is not Mode.INT:
            mode = Mode.GF2_PARAMETRIC if remaining else Mode.GF2
            relations = tuple(r.to_domain(domain_for(mode, remaining)) for r in relations)
        return Presentation(
            name=self.name,
            gens=self.gens,
            relations=relations,
            dim=self.dim,
            mode=mode,
            params=remaining,
            squares=squares,
            assume_smooth=self.assume_smooth,
            instantiations=(),
        )


def build_presentation(
    name: str,
    generators: Iterable[Tuple[str, int]],
    relations: Iterable[str | ClassPoly],
    dim: int,
    mode: Mode | str = Mode.GF2,
    params: Iterable[str] = (),
    steenrod: Optional[Mapping[str, Mapping[int, str | ClassPoly]]] = None,
    assume_smooth: bool = False,
    instantiations: Optional[Mapping[str, Mapping[str, int]]] = None,
) -> Presentation:
    """
    Parse and structurally validate a presentation. Duality checks
    (b_n = 1, pairing) need bases and live in the graded-basis module.
    """
    mode = Mode(mode)
    gens = GeneratorTable.of(generators)
    params = tuple(params)
    if dim < 1:
        raise InvalidInput("dimension must be >= 1")
    if mode is Mode.GF2 and params:
        raise InvalidInput("gf2 mode takes no parameters; use gf2-parametric")
    clash = set(params) & set(gens.names)
    if clash:
        raise InvalidInput(f"names used both as generator and parameter: {sorted(clash)}")

    domain = domain_for(mode, params)
    parsed: List[ClassPoly] = []
    for i, rel in enumerate(relations):
        r = rel if isinstance(rel, ClassPoly) else parse_expr(rel, gens, domain)
        if r.domain != domain:
            r = r.to_domain(domain)
        if r.is_zero():
            raise InvalidInput(f"relation {i + 1} is zero")
        if not r.is_homogeneous():
            raise InhomogeneousRelation(f"relation {i + 1} ({r}) mixes degrees {r.degrees()}")
        if isinstance(domain, ParamDomain):
            for _, c in r.terms():
                coefficient_bit(c)
        parsed.append(r)

    sq_domain = square_domain(params)
    squares: List[Tuple[SquareKey, ClassPoly]] = []
    for gen_name, entries in (steenrod or {}).items():
        g = gens.index(gen_name)
        deg = gens.degrees[g]
        for i, value in sorted(((int(k), v) for k, v in entries.items()), key=lambda kv: kv[0]):
            if not is_power_of_two(i) or i > deg:
                raise InvalidInput(f"Sq^{i} {gen_name}: index must be a power of two <= {deg}")
            v = value if isinstance(value, ClassPoly) else parse_expr(value, gens, sq_domain)
            if v.domain != sq_domain:
                v = v.to_domain(sq_domain)
            if not v.is_zero() and v.degrees() != [deg + i]:
                raise InhomogeneousRelation(
                    f"Sq^{i} {gen_name} must have degree {deg + i}, got {v.degrees()}"
                )
            squares.append(((gen_name, i), v))

    inst = []
    for key, assignment in sorted((instantiations or {}).items()):
        unknown = set(assignment) - set(params)
        if unknown:
            raise InvalidInput(f"instantiation {key!r} sets undeclared parameters {sorted(unknown)}")
        inst.append((key, tuple(sorted((k, int(v) & 1) for k, v in assignment.items()))))

    logger.debug("built presentation %s: %d generators, %d relations", name, len(gens), len(parsed))
    return Presentation(
        name=name,
        gens=gens,
        relations=tuple(parsed),
        dim=dim,
        mode=mode,
        params=params,
        squares=tuple(squares),
        assume_smooth=assume_smooth,
        instantiations=tuple(inst),
    )


def reduce_coefficients_mod2(p: Presentation) -> Presentation:
    """
    Same generators, relations read mod 2. No torsion check here.
    """
    mode = Mode.GF2_PARAMETRIC if p.params else Mode.GF2
    domain = domain_for(mode, p.params)
    relations = []
    for r in p.relations:
        reduced = r.to_domain(domain)
        if not reduced.is_zero():
            relations.append(reduced)
    return Presentation(
        name=p.name if p.mode is not Mode.INT else f"{p.name}-mod2",
        gens=p.gens,
        relations=tuple(relations),
        dim=p.dim,
        mode=mode,
        params=p.params,
        squares=p.squares,
        assume_smooth=p.assume_smooth,
        instantiations=p.instantiations,
    )


def tensor_product(p: Presentation, q: Presentation, name: Optional[str] = None) -> Presentation:
    """
    Presentation of the product of two spaces: generators side by side,
    relations and Steenrod tables carried over, dimensions added.
    Clashing generator names get suffixes 1 and 2.
    """
    if (p.mode is Mode.INT) != (q.mode is Mode.INT):
        raise InvalidInput("cannot tensor an integral presentation with a mod-2 one")
    clash = set(p.gens.names) & set(q.gens.names)
    left_names = [f"{n}1" if n in clash else n for n in p.gens.names]
    right_names = [f"{n}2" if n in clash else n for n in q.gens.names]
    params = tuple(dict.fromkeys(p.params + q.params))
    if p.mode is Mode.INT:
        mode = Mode.INT
    else:
        mode = Mode.GF2_PARAMETRIC if params else Mode.GF2

    gens = GeneratorTable(tuple(left_names + right_names), p.gens.degrees + q.gens.degrees)
    width_p, width_q = len(p.gens), len(q.gens)

    def embed(c: ClassPoly, left: bool, domain: Domain) -> ClassPoly:
        terms: Dict[Tuple[int, ...], Any] = {}
        for m, coef in c.to_domain(domain).terms():
            full = m + (0,) * width_q if left else (0,) * width_p + m
            terms[full] = coef
        return ClassPoly(gens, domain, terms)

    domain = domain_for(mode, params)
    sq_domain = square_domain(params)
    relations = tuple(embed(r, True, domain) for r in p.relations) + tuple(
        embed(r, False, domain) for r in q.relations
    )
    rename_p = dict(zip(p.gens.names, left_names))
    rename_q = dict(zip(q.gens.names, right_names))
    squares = tuple(((rename_p[g], i), embed(v, True, sq_domain)) for (g, i), v in p.squares) + tuple(
        ((rename_q[g], i), embed(v, False, sq_domain)) for (g, i), v in q.squares
    )
    return Presentation(
        name=name or f"{p.name}x{q.name}",
        gens=gens,
        relations=relations,
        dim=p.dim + q.dim,
        mode=mode,
        params=params,
        squares=squares,
        assume_smooth=p.assume_smooth and q.assume_smooth,
    )


def power(p: Presentation, m: int) -> Presentation:
    if m < 1:
        raise InvalidInput("tensor power needs m >= 1")
    if m > 2:
        raise InvalidInput("tensor powers are limited to m <= 2")
    return p if m == 1 else tensor_product(p, p)
