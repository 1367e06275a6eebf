import pytest

from sqorient.services.errors import ExpressionSyntaxError, NegativeExponent, UnknownIdentifier
from sqorient.services.expr import parse_expr, render, render_coefficient
from sqorient.services.poly import GF2, INTEGERS, GeneratorTable, ParamDomain, ParamPoly

EVI_GENS = GeneratorTable.of([("y2", 2), ("y3", 3), ("y12", 12), ("y16", 16), ("y20", 20)])
EIII_GENS = GeneratorTable.of([("t", 2), ("w", 8)])


@pytest.mark.parametrize(
    "text",
    [
        "y2^6*y3 + y3*y12",
        "y2^9 + y2^6*y3^2 + y2^3*y12 + y3^2*y12",
        "y12*y16 + y2^14 + y12*y2^5*y3^2 + y2^11*y3^2",
        "0",
        "1",
    ],
)
def test_render_parses_back(text):
    p = parse_expr(text, EVI_GENS, GF2)
    assert parse_expr(render(p), EVI_GENS, GF2) == p


def test_render_is_grevlex_ascending():
    p = parse_expr("y3*y12 + y2^6*y3", EVI_GENS, GF2)
    assert render(p) == "y2^6*y3 + y3*y12"


def test_minus_is_plus_mod_two():
    assert parse_expr("y3^3 - y2*y16", EVI_GENS, GF2) == parse_expr("y3^3 + y2*y16", EVI_GENS, GF2)


def test_integer_coefficients_and_signs():
    r = parse_expr("t^9 - 3*w^2*t", EIII_GENS, INTEGERS)
    assert r.coefficient((1, 2)) == -3
    assert r.coefficient((9, 0)) == 1
    assert parse_expr(render(r), EIII_GENS, INTEGERS) == r
    assert "- 3 * t*w^2" in render(r)


def test_parametric_coefficients_render_in_parentheses():
    dom = ParamDomain(("a1", "b2", "n2"))
    p = parse_expr("(1 + a1)*y2^6*y3^2", EVI_GENS, dom)
    assert render(p) == "(1+a1) * y2^6*y3^2"
    q = parse_expr("a1*y2^4*y3^3", EVI_GENS, dom)
    assert render(q) == "a1 * y2^4*y3^3"
    assert parse_expr(render(p), EVI_GENS, dom) == p


def test_unknown_identifier_reports_position():
    with pytest.raises(UnknownIdentifier) as info:
        parse_expr("y2 + z7", EVI_GENS, GF2)
    assert info.value.name == "z7"
    assert info.value.position == 5


def test_negative_exponent():
    with pytest.raises(NegativeExponent):
        parse_expr("y2^-1", EVI_GENS, GF2)


@pytest.mark.parametrize("text", ["y2 +", "y2 * * y3", "(y2 + y3", "y2 $ y3", "y2^y3"])
def test_syntax_errors(text):
    with pytest.raises(ExpressionSyntaxError) as info:
        parse_expr(text, EVI_GENS, GF2)
    assert 0 <= info.value.position <= len(text)


def test_render_coefficient():
    names = ("b2", "n2")
    c = ParamPoly.one(names) + ParamPoly.variable(names, "b2") + ParamPoly.variable(names, "n2")
    assert render_coefficient(c) == "1+b2+n2"
    assert render_coefficient(0) == "0"
    assert render_coefficient(-78) == "-78"
