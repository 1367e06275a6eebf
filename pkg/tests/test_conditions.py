import pytest

from sqorient.services.conditions import ParamIdeal, canonical_conditions
from sqorient.services.errors import DomainMismatch
from sqorient.services.poly import ParamPoly

NAMES = ("a", "b", "c", "d")


def poly(*monomials: str) -> ParamPoly:
    """
    Sum of monomials written as "1", "b" or "b*d".
    """
    out = ParamPoly.zero(NAMES)
    for m in monomials:
        term = ParamPoly.one(NAMES)
        if m != "1":
            for name in m.split("*"):
                term = term * ParamPoly.variable(NAMES, name)
        out = out + term
    return out


def rendered(conditions):
    return [c.render() for c in conditions]


def test_equivalent_condition_sets_share_generators():
    direct = canonical_conditions(NAMES, [poly("1", "b"), poly("1", "d")])
    roundabout = canonical_conditions(NAMES, [poly("1", "b"), poly("b", "d"), poly("d", "b*d")])
    assert rendered(direct) == ["1+b", "1+d"]
    assert roundabout == direct


def test_boolean_consequences_are_generated():
    ideal = ParamIdeal(NAMES, [poly("a*b", "c")])
    assert "c+a*b" in rendered(ideal.generators)
    # a*(a*b + c) = a*b + a*c in the Boolean ring
    assert ideal.contains(poly("c", "a*c"))
    assert not ideal.contains(poly("c"))


def test_membership():
    ideal = ParamIdeal(NAMES, [poly("1", "b"), poly("c", "d")])
    assert ideal.contains(poly("1", "b"))
    assert ideal.contains(poly("b", "c", "d", "1"))
    assert ideal.contains(poly("a", "a*b"))
    assert not ideal.contains(poly("c"))
    assert ideal.contains(ParamPoly.zero(NAMES))


def test_contradictory_conditions_make_the_unit_ideal():
    ideal = ParamIdeal(NAMES, [poly("b"), poly("1", "b")])
    assert ideal.is_unit
    assert rendered(ideal.generators) == ["1"]
    assert ideal.contains(poly("a", "c"))


def test_empty_and_zero_conditions():
    ideal = ParamIdeal(NAMES, [ParamPoly.zero(NAMES)])
    assert not ideal
    assert ideal.generators == ()
    assert not ideal.is_unit
    assert not ideal.contains(poly("a"))
    assert ParamIdeal((), []).generators == ()


def test_parameter_lists_must_match():
    with pytest.raises(DomainMismatch):
        ParamIdeal(("a", "b"), [poly("a")])
