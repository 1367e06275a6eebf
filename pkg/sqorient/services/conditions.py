from __future__ import annotations

from typing import Iterable, Sequence, Tuple

import sympy as sp

from ..log import get_logger
from .errors import DomainMismatch
from .poly import ParamPoly

logger = get_logger(__name__)


class ParamIdeal:
    """
    Ideal of the Boolean ring GF(2)[params]/(p^2 + p) spanned by a set of
    conditions. `generators` is the reduced grevlex Groebner basis with
    the field equations left out, so two condition sets with the same
    zeros give the same generators.
    """

    def __init__(self, names: Sequence[str], conditions: Iterable[ParamPoly] = ()):
        self.names = tuple(names)
        self._symbols = [sp.Symbol(n) for n in self.names]
        polys = [c for c in conditions if not c.is_zero()]
        for c in polys:
            if c.names != self.names:
                raise DomainMismatch(f"condition {c} uses parameters {c.names}, expected {self.names}")
        self._basis = None
        if not self._symbols:
            constant = any(c.is_constant() for c in polys)
            self.generators: Tuple[ParamPoly, ...] = (ParamPoly.one(self.names),) if constant else ()
            return
        field = [s**2 + s for s in self._symbols]
        self._basis = sp.groebner([*map(self._to_expr, polys), *field], *self._symbols, order="grevlex", modulus=2)
        self.generators = tuple(
            sorted(
                (self._from_poly(g) for g in self._basis.polys if not self._is_field_equation(g)),
                key=lambda c: (len(c.terms), c.render()),
            )
        )
        logger.debug("%d conditions reduce to %s", len(polys), [g.render() for g in self.generators])

    @property
    def is_unit(self) -> bool:
        return any(g.is_one() for g in self.generators)

    def contains(self, c: ParamPoly) -> bool:
        if c.is_zero():
            return True
        if self._basis is None:
            return self.is_unit
        return self._basis.contains(self._to_expr(c))

    def __bool__(self) -> bool:
        return bool(self.generators)

    def __repr__(self) -> str:
        return f"ParamIdeal({[g.render() for g in self.generators]})"

    # ----- sympy conversion -----

    def _to_expr(self, c: ParamPoly) -> sp.Expr:
        terms = []
        for t in c.terms:
            terms.append(sp.Mul(*(s for i, s in enumerate(self._symbols) if t >> i & 1)))
        return sp.Add(*terms)

    def _from_poly(self, g: sp.Poly) -> ParamPoly:
        out: set = set()
        for monom, coeff in g.terms():
            if int(coeff) % 2:
                out ^= {sum(1 << i for i, e in enumerate(monom) if e)}
        return ParamPoly(self.names, frozenset(out))

    @staticmethod
    def _is_field_equation(g: sp.Poly) -> bool:
        monoms = sorted(g.monoms(), reverse=True)
        if len(monoms) != 2 or max(monoms[0]) != 2 or sum(monoms[0]) != 2:
            return False
        return tuple(min(e, 1) for e in monoms[0]) == monoms[1]


def canonical_conditions(names: Sequence[str], conditions: Iterable[ParamPoly]) -> Tuple[ParamPoly, ...]:
    return ParamIdeal(names, conditions).generators
