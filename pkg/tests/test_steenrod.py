import random
from math import comb

import pytest

from sqorient.services.basis import mod2_ring
from sqorient.services.corpus import builtin, projective_space
from sqorient.services.errors import DegreeOverflow, InvalidInput, MissingEntry, TableIncomplete
from sqorient.services.expr import render_coefficient
from sqorient.services.poly import ParamPoly
from sqorient.services.presentation import build_presentation
from sqorient.services.steenrod import (
    FORCED,
    MISSING,
    USER,
    adem_constraints,
    adem_decompose,
    adem_residues,
    binomial_mod2,
    complete_table,
    compositions,
    sq,
    top_square,
    total_square,
)


def test_binomial_mod2_matches_binomial():
    for n in range(40):
        for k in range(n + 1):
            assert binomial_mod2(n, k) == comb(n, k) % 2
    assert binomial_mod2(3, 5) == 0
    assert binomial_mod2(-1, 0) == 0


@pytest.mark.parametrize(
    "k, composites",
    [
        (1, ((1,),)),
        (3, ((1, 2),)),
        (5, ((1, 4),)),
        (6, ((2, 4), (1, 4, 1))),
        (7, ((1, 2, 4),)),
    ],
)
def test_adem_decompose(k, composites):
    assert adem_decompose(k).composites == composites


def test_adem_decompose_render():
    assert adem_decompose(6).render() == "Sq^2 Sq^4 + Sq^1 Sq^4 Sq^1"
    with pytest.raises(InvalidInput):
        adem_decompose(0)


def test_compositions_counts():
    assert sum(1 for _ in compositions(8, 12)) == comb(19, 11) == 75582
    assert list(compositions(2, 4))[:3] == [(0, 0, 0, 2), (0, 0, 1, 1), (0, 0, 2, 0)]
    assert sum(1 for _ in compositions(2, 4)) == 10


def test_compositions_respect_bounds():
    parts = list(compositions(4, 3, [1, 2, 3]))
    assert all(a <= 1 and b <= 2 and c <= 3 for a, b, c in parts)
    assert parts and all(sum(p) == 4 for p in parts)
    assert list(compositions(7, 2, [3, 3])) == []


def test_real_projective_squares_are_binomial():
    rp = projective_space("RP", 15)
    table = complete_table(rp)
    for j in range(1, 16):
        c = rp.parse(f"x^{j}")
        for i in range(0, 16 - j):
            assert sq(c, i, rp, table) == (binomial_mod2(j, i),)


def test_evi_table_provenance(evi, evi_table):
    assert evi_table.entry("y12", 2).provenance == USER
    forced = evi_table.entry("y3", 2)
    assert forced.provenance == FORCED
    ring = mod2_ring(evi)
    assert ring.normal_form(forced.value, 5) == ring.normal_form(evi.parse("y2*y3"), 5)
    assert evi_table.missing() == ["Sq^16 y20"]
    assert evi_table.entry("y20", 16).provenance == MISSING
    with pytest.raises(TableIncomplete) as info:
        evi_table.value("y20", 16)
    assert info.value.entry == "Sq^16 y20"


def test_strict_table_raises_on_the_gap(evi):
    with pytest.raises(MissingEntry):
        complete_table(evi, strict=True)


def _monomials(p, rng, count, max_degree):
    found = []
    while len(found) < count:
        exps = tuple(rng.randint(0, 3) for _ in p.gens.names)
        d = sum(e * g for e, g in zip(exps, p.gens.degrees))
        if 0 < d <= max_degree:
            found.append(p.parse("*".join(f"{n}^{e}" for n, e in zip(p.gens.names, exps) if e)))
    return found


def test_unstable_axioms(evi, evi_table):
    rng = random.Random(7)
    ring = mod2_ring(evi)
    for c in _monomials(evi, rng, 12, 32):
        d = c.degree()
        assert ring.normal_form(evi_table.sq_polynomial(c, 0), d) == ring.normal_form(c, d)
        assert ring.normal_form(evi_table.sq_polynomial(c, d), 2 * d) == ring.normal_form(c * c, 2 * d)
        assert evi_table.sq_polynomial(c, d + 1).is_zero()


def test_cartan_evaluation_agrees_with_naive(evi, evi_table):
    rng = random.Random(11)
    ring = mod2_ring(evi)
    for c in _monomials(evi, rng, 10, 48):
        d = c.degree()
        for n in range(1, min(9, 64 - d + 1)):
            fast = evi_table.sq_polynomial(c, n)
            slow = evi_table.sq_naive(c, n)
            assert ring.normal_form(fast, d + n) == ring.normal_form(slow, d + n)


def test_sq1_squares_to_zero(evi, evi_table):
    rng = random.Random(3)
    for c in _monomials(evi, rng, 10, 40):
        assert evi_table.sq_polynomial(evi_table.sq_polynomial(c, 1), 1).is_zero()


@pytest.mark.parametrize(
    "cls, n, expected",
    [
        ("y2^12*y12*y20", 8, ["1+b2+n2"]),
        ("y2^9*y3^2*y12*y20", 8, ["0"]),
        ("y20^3", 4, ["0"]),
    ],
)
def test_evi_top_squares(evi, evi_table, cls, n, expected):
    coords = sq(evi.parse(cls), n, evi, evi_table)
    assert [render_coefficient(x) for x in coords] == expected


def test_top_square_and_total_square(cp2):
    x = cp2.parse("x")
    assert top_square(x, 2, cp2) == 1
    assert total_square(x, cp2) == {2: (1,), 3: (), 4: (1,)}


def test_sq_overflow_and_zero_class(cp2):
    with pytest.raises(DegreeOverflow):
        sq(cp2.parse("x^2"), 2, cp2)
    zero = cp2.parse("0")
    with pytest.raises(InvalidInput):
        sq(zero, 2, cp2)
    assert sq(zero, 2, cp2, degree=2) == (0,)


@pytest.mark.parametrize("name", ["RP8", "CP4", "HP2", "OP2", "OP2xOP2"])
def test_projective_tables_satisfy_adem(name):
    p = builtin(name)
    assert adem_residues(complete_table(p)) == []
    assert not adem_constraints(p)


def test_adem_residue_pins_a_parameter():
    p = build_presentation(
        "twisted",
        [("x", 2), ("y", 3)],
        ["x^3", "x*y"],
        dim=4,
        mode="gf2-parametric",
        params=["a"],
        steenrod={"x": {1: "y"}, "y": {1: "a*x^2"}},
    )
    [residue] = adem_residues(complete_table(p))
    assert residue.render() == "Sq^1 Sq^1 x"
    assert residue.degree == 4
    assert [c.render() for c in residue.coordinates] == ["a"]
    assert [c.render() for c in adem_constraints(p).generators] == ["a"]


def _params(names, *monomials):
    out = ParamPoly.zero(names)
    for m in monomials:
        out = out + (ParamPoly.one(names) if m == "1" else ParamPoly.variable(names, m))
    return out


def test_evi_table_needs_parameter_relations(evi, evi_table):
    failing = {r.render() for r in adem_residues(evi_table)}
    assert {"Sq^2 Sq^2 y20", "Sq^4 Sq^4 y20"} <= failing
    names = evi_table.domain.parameters
    constraints = adem_constraints(evi, evi_table)
    assert not constraints.is_unit
    assert constraints.contains(_params(names, "1", "m0", "n0"))
    assert constraints.contains(_params(names, "a1", "m1"))
    assert constraints.contains(_params(names, "n0", "n1"))
    assert constraints is evi_table.constraints()
