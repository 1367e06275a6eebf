from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from typing import Any, Callable, Dict, Iterable, List, Mapping, Optional, Tuple

from .errors import DomainMismatch, InhomogeneousInput, InvalidAssignment, InvalidInput

# Exponent vector, one entry per declared generator
Monomial = Tuple[int, ...]

IDENTIFIER = re.compile(r"[A-Za-z_][A-Za-z0-9_']*\Z")


class Mode(str, Enum):
    GF2 = "gf2"
    GF2_PARAMETRIC = "gf2-parametric"
    INT = "int"


# ---------- generators and monomials ----------

@dataclass(frozen=True)
class GeneratorTable:
    """
    Ordered generators with their cohomological degrees.
    The declaration order fixes the monomial order everywhere downstream.
    """
    names: Tuple[str, ...]
    degrees: Tuple[int, ...]

    def __post_init__(self):
        if len(self.names) != len(self.degrees):
            raise InvalidInput("every generator needs exactly one degree")
        if len(set(self.names)) != len(self.names):
            raise InvalidInput("generator names must be unique")
        for name, degree in zip(self.names, self.degrees):
            if not IDENTIFIER.match(name):
                raise InvalidInput(f"invalid generator name {name!r}")
            if degree < 1:
                raise InvalidInput(f"generator {name} must have degree >= 1")

    @classmethod
    def of(cls, pairs: Iterable[Tuple[str, int]]) -> GeneratorTable:
        pairs = list(pairs)
        return cls(tuple(n for n, _ in pairs), tuple(int(d) for _, d in pairs))

    def __len__(self) -> int:
        return len(self.names)

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise InvalidInput(f"unknown generator {name!r}") from None

    @property
    def unit(self) -> Monomial:
        return (0,) * len(self.names)

    def generator(self, i: int) -> Monomial:
        m = [0] * len(self.names)
        m[i] = 1
        return tuple(m)

    def degree(self, m: Monomial) -> int:
        return sum(e * d for e, d in zip(m, self.degrees))

    @staticmethod
    def multiply(a: Monomial, b: Monomial) -> Monomial:
        return tuple(x + y for x, y in zip(a, b))

    def order_key(self, m: Monomial) -> Tuple[int, Tuple[int, ...]]:
        # grevlex: degree first, then the smaller exponent of the
        # earliest-declared generator is the larger monomial
        return (self.degree(m), tuple(-e for e in m))

    def render_monomial(self, m: Monomial) -> str:
        parts = []
        for name, e in zip(self.names, m):
            if e == 1:
                parts.append(name)
            elif e > 1:
                parts.append(f"{name}^{e}")
        return "*".join(parts) if parts else "1"


# ---------- multilinear parameter polynomials ----------

@dataclass(frozen=True)
class ParamPoly:
    """
    GF(2) polynomial in Boolean parameters, kept multilinear (p^2 = p).
    A term is a bitmask over `names`; the zero polynomial has no terms.
    """
    names: Tuple[str, ...]
    terms: frozenset = frozenset()

    @classmethod
    def zero(cls, names: Tuple[str, ...]) -> ParamPoly:
        return cls(names, frozenset())

    @classmethod
    def one(cls, names: Tuple[str, ...]) -> ParamPoly:
        return cls(names, frozenset({0}))

    @classmethod
    def constant(cls, names: Tuple[str, ...], bit: int) -> ParamPoly:
        return cls.one(names) if bit & 1 else cls.zero(names)

    @classmethod
    def variable(cls, names: Tuple[str, ...], name: str) -> ParamPoly:
        return cls(names, frozenset({1 << names.index(name)}))

    def _coerce(self, other: Any) -> ParamPoly:
        if isinstance(other, ParamPoly):
            if other.names != self.names:
                raise DomainMismatch("parameter lists differ")
            return other
        if isinstance(other, int):
            return ParamPoly.constant(self.names, other)
        return NotImplemented

    def __add__(self, other: Any) -> ParamPoly:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return ParamPoly(self.names, self.terms ^ other.terms)

    __radd__ = __add__
    __sub__ = __add__

    def __neg__(self) -> ParamPoly:
        return self

    def __mul__(self, other: Any) -> ParamPoly:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out: set = set()
        for a in self.terms:
            for b in other.terms:
                out ^= {a | b}
        return ParamPoly(self.names, frozenset(out))

    __rmul__ = __mul__

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def is_one(self) -> bool:
        return self.terms == frozenset({0})

    def is_constant(self) -> bool:
        return self.terms <= frozenset({0})

    def variables(self) -> Tuple[str, ...]:
        used = 0
        for t in self.terms:
            used |= t
        return tuple(n for i, n in enumerate(self.names) if used >> i & 1)

    def evaluate(self, assignment: Mapping[str, int]) -> int:
        missing = [n for n in self.variables() if n not in assignment]
        if missing:
            raise InvalidAssignment(f"no value for parameter(s) {', '.join(missing)}")
        return 1 if self.substitute(assignment).is_one() else 0

    def substitute(self, assignment: Mapping[str, int]) -> ParamPoly:
        fixed_ones = 0
        fixed_zeros = 0
        for name, bit in assignment.items():
            if name not in self.names:
                raise InvalidAssignment(f"unknown parameter {name!r}")
            if bit not in (0, 1):
                raise InvalidAssignment(f"parameter {name} must be 0 or 1")
            mask = 1 << self.names.index(name)
            if bit:
                fixed_ones |= mask
            else:
                fixed_zeros |= mask
        out: set = set()
        for t in self.terms:
            if t & fixed_zeros:
                continue
            out ^= {t & ~fixed_ones}
        return ParamPoly(self.names, frozenset(out))

    def _term_key(self, t: int) -> Tuple[int, Tuple[int, ...]]:
        bits = tuple(i for i in range(len(self.names)) if t >> i & 1)
        return (len(bits), bits)

    def render(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for t in sorted(self.terms, key=self._term_key):
            if t == 0:
                parts.append("1")
            else:
                parts.append("*".join(self.names[i] for i in self._term_key(t)[1]))
        return "+".join(parts)

    def __str__(self) -> str:
        return self.render()


# ---------- coefficient domains ----------

class GF2Domain:
    name = "gf2"
    characteristic = 2
    zero = 0
    one = 1
    parameters: Tuple[str, ...] = ()

    def add(self, a: int, b: int) -> int:
        return a ^ b

    def mul(self, a: int, b: int) -> int:
        return a & b

    def neg(self, a: int) -> int:
        return a

    def is_zero(self, a: int) -> bool:
        return a == 0

    def is_one(self, a: int) -> bool:
        return a == 1

    def from_int(self, n: int) -> int:
        return n & 1

    def parameter(self, name: str) -> Optional[int]:
        return None

    def render(self, a: int) -> Tuple[str, bool]:
        return str(a), False

    def __eq__(self, other: Any) -> bool:
        return isinstance(other, GF2Domain)

    def __hash__(self) -> int:
        return hash("gf2")

    def __repr__(self) -> str:
        return "GF2Domain()"


class IntegerDomain:
    name = "int"
    characteristic = 0
    zero = 0
    one = 1
    parameters: Tuple[str, ...] = ()

    def add(self, a: int, b: int) -> int:
        return a + b

    def mul(self, a: int, b: int) -> int:
        return a * b

    def neg(self, a: int) -> int:
        return -a

    def is_zero(self, a: int) -> bool:
        return a == 0

    def is_one(self, a: int) -> bool:
        return a == 1

    def from_int(self, n: int) -> int:
        return n

    def parameter(self, name: str) -> Optional[int]:
        return None

    def render(self, a: int) -> Tuple[str, bool]:
        return str(a), False

    def __eq__(self, other: Any) -> bool:
        return isinstance(other, IntegerDomain)

    def __hash__(self) -> int:
        return hash("int")

    def __repr__(self) -> str:
        return "IntegerDomain()"


class ParamDomain:
    name = "gf2-parametric"
    characteristic = 2

    def __init__(self, parameters: Iterable[str]):
        self.parameters = tuple(parameters)
        if len(set(self.parameters)) != len(self.parameters):
            raise InvalidInput("parameter names must be unique")
        for p in self.parameters:
            if not IDENTIFIER.match(p):
                raise InvalidInput(f"invalid parameter name {p!r}")
        self.zero = ParamPoly.zero(self.parameters)
        self.one = ParamPoly.one(self.parameters)

    def add(self, a: ParamPoly, b: ParamPoly) -> ParamPoly:
        return a + b

    def mul(self, a: ParamPoly, b: ParamPoly) -> ParamPoly:
        return a * b

    def neg(self, a: ParamPoly) -> ParamPoly:
        return a

    def is_zero(self, a: ParamPoly) -> bool:
        return a.is_zero()

    def is_one(self, a: ParamPoly) -> bool:
        return a.is_one()

    def from_int(self, n: int) -> ParamPoly:
        return ParamPoly.constant(self.parameters, n)

    def parameter(self, name: str) -> Optional[ParamPoly]:
        if name in self.parameters:
            return ParamPoly.variable(self.parameters, name)
        return None

    def render(self, a: ParamPoly) -> Tuple[str, bool]:
        return a.render(), len(a.terms) > 1

    def __eq__(self, other: Any) -> bool:
        return isinstance(other, ParamDomain) and other.parameters == self.parameters

    def __hash__(self) -> int:
        return hash(("param", self.parameters))

    def __repr__(self) -> str:
        return f"ParamDomain({list(self.parameters)!r})"


Domain = GF2Domain | IntegerDomain | ParamDomain

GF2 = GF2Domain()
INTEGERS = IntegerDomain()


def domain_for(mode: Mode, parameters: Iterable[str] = ()) -> Domain:
    parameters = tuple(parameters)
    if mode is Mode.INT:
        return INTEGERS
    if mode is Mode.GF2_PARAMETRIC:
        return ParamDomain(parameters)
    return GF2


def square_domain(parameters: Iterable[str]) -> Domain:
    """
    Domain of mod-2 classes and Steenrod values for a given parameter list.
    """
    parameters = tuple(parameters)
    return ParamDomain(parameters) if parameters else GF2


# ---------- classes ----------

class ClassPoly:
    """
    Finite sum of monomials with coefficients in a domain. Immutable;
    zero coefficients are never stored.
    """
    __slots__ = ("gens", "domain", "_terms", "_hash")

    def __init__(self, gens: GeneratorTable, domain: Domain, terms: Optional[Mapping[Monomial, Any]] = None):
        self.gens = gens
        self.domain = domain
        clean: Dict[Monomial, Any] = {}
        for m, c in (terms or {}).items():
            if len(m) != len(gens):
                raise InvalidInput("monomial length does not match the generator table")
            if not domain.is_zero(c):
                clean[tuple(m)] = c
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, gens: GeneratorTable, domain: Domain, terms: Dict[Monomial, Any]) -> ClassPoly:
        obj = cls.__new__(cls)
        obj.gens = gens
        obj.domain = domain
        obj._terms = terms
        obj._hash = None
        return obj

    # ----- constructors -----

    @classmethod
    def zero(cls, gens: GeneratorTable, domain: Domain) -> ClassPoly:
        return cls._raw(gens, domain, {})

    @classmethod
    def constant(cls, gens: GeneratorTable, domain: Domain, c: Any) -> ClassPoly:
        if isinstance(c, int) and not isinstance(domain, IntegerDomain):
            c = domain.from_int(c)
        return cls(gens, domain, {gens.unit: c})

    @classmethod
    def one(cls, gens: GeneratorTable, domain: Domain) -> ClassPoly:
        return cls._raw(gens, domain, {gens.unit: domain.one})

    @classmethod
    def monomial(cls, gens: GeneratorTable, domain: Domain, m: Monomial, c: Any = None) -> ClassPoly:
        return cls(gens, domain, {tuple(m): domain.one if c is None else c})

    @classmethod
    def generator(cls, gens: GeneratorTable, domain: Domain, name: str) -> ClassPoly:
        return cls._raw(gens, domain, {gens.generator(gens.index(name)): domain.one})

    # ----- inspection -----

    def terms(self) -> List[Tuple[Monomial, Any]]:
        return sorted(self._terms.items(), key=lambda mc: self.gens.order_key(mc[0]))

    def monomials(self) -> List[Monomial]:
        return [m for m, _ in self.terms()]

    def coefficient(self, m: Monomial) -> Any:
        return self._terms.get(tuple(m), self.domain.zero)

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def degrees(self) -> List[int]:
        return sorted({self.gens.degree(m) for m in self._terms})

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    def degree(self) -> Optional[int]:
        """
        Degree of a homogeneous class; None for zero.
        """
        degrees = self.degrees()
        if not degrees:
            return None
        if len(degrees) > 1:
            raise InhomogeneousInput(f"class mixes degrees {degrees}")
        return degrees[0]

    def homogeneous_part(self, d: int) -> ClassPoly:
        return ClassPoly._raw(
            self.gens, self.domain, {m: c for m, c in self._terms.items() if self.gens.degree(m) == d}
        )

    def __eq__(self, other: Any) -> bool:
        if not isinstance(other, ClassPoly):
            return NotImplemented
        return self.gens == other.gens and self.domain == other.domain and self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.gens, self.domain, frozenset(self._terms.items())))
        return self._hash

    def __repr__(self) -> str:
        return f"ClassPoly({self})"

    def __str__(self) -> str:
        from .expr import render

        return render(self)

    # ----- arithmetic -----

    def _check(self, other: ClassPoly) -> None:
        if not isinstance(other, ClassPoly):
            raise DomainMismatch(f"cannot combine a class with {type(other).__name__}")
        if other.gens != self.gens:
            raise DomainMismatch("classes live over different generator tables")
        if other.domain != self.domain:
            raise DomainMismatch(f"coefficient domains differ: {self.domain!r} vs {other.domain!r}")

    def __add__(self, other: ClassPoly) -> ClassPoly:
        self._check(other)
        dom = self.domain
        out = dict(self._terms)
        for m, c in other._terms.items():
            if m in out:
                s = dom.add(out[m], c)
                if dom.is_zero(s):
                    del out[m]
                else:
                    out[m] = s
            else:
                out[m] = c
        return ClassPoly._raw(self.gens, dom, out)

    def __neg__(self) -> ClassPoly:
        dom = self.domain
        return ClassPoly._raw(self.gens, dom, {m: dom.neg(c) for m, c in self._terms.items()})

    def __sub__(self, other: ClassPoly) -> ClassPoly:
        return self + (-other)

    def __mul__(self, other: ClassPoly) -> ClassPoly:
        self._check(other)
        dom = self.domain
        out: Dict[Monomial, Any] = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                c = dom.mul(c1, c2)
                if dom.is_zero(c):
                    continue
                m = GeneratorTable.multiply(m1, m2)
                if m in out:
                    s = dom.add(out[m], c)
                    if dom.is_zero(s):
                        del out[m]
                    else:
                        out[m] = s
                else:
                    out[m] = c
        return ClassPoly._raw(self.gens, dom, out)

    def __pow__(self, k: int) -> ClassPoly:
        if k < 0:
            raise InvalidInput("negative exponent")
        result = ClassPoly.one(self.gens, self.domain)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def scale(self, c: Any) -> ClassPoly:
        dom = self.domain
        out = {}
        for m, a in self._terms.items():
            p = dom.mul(c, a)
            if not dom.is_zero(p):
                out[m] = p
        return ClassPoly._raw(self.gens, dom, out)

    def frobenius(self, times: int = 1) -> ClassPoly:
        """
        Raise to the power 2**times; in characteristic 2 this only scales exponents.
        """
        if self.domain.characteristic != 2:
            raise DomainMismatch("Frobenius shortcut needs characteristic 2")
        factor = 1 << times
        return ClassPoly._raw(
            self.gens, self.domain, {tuple(e * factor for e in m): c for m, c in self._terms.items()}
        )

    # ----- coefficient changes -----

    def map_coefficients(self, fn: Callable[[Any], Any], domain: Optional[Domain] = None) -> ClassPoly:
        return ClassPoly(self.gens, domain or self.domain, {m: fn(c) for m, c in self._terms.items()})

    def to_domain(self, domain: Domain) -> ClassPoly:
        """
        Move coefficients into another domain: integers reduce mod 2,
        constant parameter polynomials drop to GF(2), GF(2) lifts to parameters.
        """
        if domain == self.domain:
            return self
        if isinstance(domain, IntegerDomain):
            raise DomainMismatch("cannot lift mod-2 coefficients to the integers")

        def convert(c: Any) -> Any:
            if isinstance(c, ParamPoly):
                if isinstance(domain, ParamDomain):
                    if c.names == domain.parameters:
                        return c
                    return _rebase(c, domain.parameters)
                if not c.is_constant():
                    raise DomainMismatch(f"coefficient {c} depends on parameters")
                return 1 if c.is_one() else 0
            return domain.from_int(c)

        return self.map_coefficients(convert, domain)

    def substitute(self, assignment: Mapping[str, int]) -> ClassPoly:
        if not isinstance(self.domain, ParamDomain) or not assignment:
            return self
        return self.map_coefficients(lambda c: c.substitute(assignment))


def _rebase(c: ParamPoly, names: Tuple[str, ...]) -> ParamPoly:
    out: set = set()
    for t in c.terms:
        mask = 0
        for i, n in enumerate(c.names):
            if t >> i & 1:
                if n not in names:
                    raise DomainMismatch(f"parameter {n} is not declared")
                mask |= 1 << names.index(n)
        out ^= {mask}
    return ParamPoly(names, frozenset(out))


def poly_mul(a: ClassPoly, b: ClassPoly) -> ClassPoly:
    return a * b


def substitute(c: ClassPoly, assignment: Mapping[str, int]) -> ClassPoly:
    return c.substitute(assignment)


def coefficient_bit(c: Any) -> int:
    """
    0/1 value of a constant GF(2) or parameter coefficient.
    """
    if isinstance(c, ParamPoly):
        if not c.is_constant():
            raise DomainMismatch(f"coefficient {c} depends on parameters")
        return 1 if c.is_one() else 0
    return int(c) & 1
