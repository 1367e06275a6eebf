import random

import pytest

from sqorient.services.basis import graded_ring, mod2_ring
from sqorient.services.corpus import builtin
from sqorient.services.orientability import parity_theorem_check, wu_class
from sqorient.services.poly import ClassPoly
from sqorient.services.steenrod import complete_table, sq_naive, sq_power, top_square

# (entry, random classes); 1000 in total
SAMPLES = [("CP4", 100), ("HP2", 100), ("OP2xOP2", 200), ("EIII-mod2", 250), ("EVI", 350)]


def random_class(p, rng, max_degree):
    ring = graded_ring(p)
    while True:
        d = rng.randint(1, max_degree)
        monos = ring.monomials(d)
        if not monos:
            continue
        picked = rng.sample(monos, rng.randint(1, min(3, len(monos))))
        c = ClassPoly.zero(p.gens, p.domain)
        for m in picked:
            c = c + ClassPoly.monomial(p.gens, p.domain, m)
        if not c.is_zero():
            return c


def same(p, a, b, degree):
    ring = mod2_ring(p)
    return ring.normal_form(a, degree) == ring.normal_form(b.to_domain(a.domain), degree)


@pytest.mark.parametrize("name, count", SAMPLES)
def test_steenrod_axioms_on_random_classes(name, count):
    p = builtin(name)
    table = complete_table(p)
    rng = random.Random(name)
    for _ in range(count):
        c = random_class(p, rng, p.dim // 2)
        d = c.degree()
        assert same(p, table.sq_polynomial(c, 0), c, d)
        assert same(p, table.sq_polynomial(c, d), c * c, 2 * d)
        assert table.sq_polynomial(c, d + 1 + rng.randint(0, 3)).is_zero()


@pytest.mark.parametrize("name", ["CP4", "OP2xOP2", "EIII-mod2", "EVI"])
def test_cartan_formula_and_linearity(name):
    p = builtin(name)
    table = complete_table(p)
    rng = random.Random(17)
    for _ in range(40):
        a = random_class(p, rng, p.dim // 4)
        b = random_class(p, rng, p.dim // 4)
        n = rng.randint(0, min(8, p.dim - a.degree() - b.degree()))
        product = table.sq_polynomial(a * b, n)
        expanded = ClassPoly.zero(p.gens, table.domain)
        for i in range(n + 1):
            expanded = expanded + table.sq_polynomial(a, i) * table.sq_polynomial(b, n - i)
        assert same(p, product, expanded, a.degree() + b.degree() + n)
        if a.degree() == b.degree():
            d = a.degree()
            total = table.sq_polynomial(a + b, n)
            parts = table.sq_polynomial(a, n) + table.sq_polynomial(b, n)
            if d + n <= p.dim:
                assert same(p, total, parts, d + n)


def test_sq1_is_a_derivation(evi, evi_table):
    rng = random.Random(23)
    for _ in range(50):
        a = random_class(evi, rng, 30)
        b = random_class(evi, rng, 30)
        d = a.degree() + b.degree() + 1
        lhs = evi_table.sq_polynomial(a * b, 1)
        rhs = evi_table.sq_polynomial(a, 1) * b + a * evi_table.sq_polynomial(b, 1)
        assert same(evi, lhs, rhs, d)
        assert evi_table.sq_polynomial(evi_table.sq_polynomial(a, 1), 1).is_zero()


@pytest.mark.parametrize("name", ["EIII-mod2", "EVI"])
def test_power_squares_match_the_naive_oracle(name):
    p = builtin(name)
    table = complete_table(p)
    for g, deg in zip(p.gens.names, p.gens.degrees):
        for e in range(1, 7):
            for n in range(0, 9):
                if e * deg + n > p.dim:
                    continue
                power = p.parse(f"{g}^{e}")
                fast = sq_power(g, e, n, table)
                slow = sq_naive(power, n, table)
                assert same(p, fast, slow, e * deg + n), (g, e, n)


@pytest.mark.parametrize(
    "name, indices",
    [("CP4", range(1, 5)), ("HP2", range(1, 5)), ("OP2xOP2", range(1, 17)), ("EVI", range(1, 9))],
)
def test_wu_classes_satisfy_their_definition(name, indices):
    p = builtin(name)
    table = complete_table(p)
    ring = mod2_ring(p)
    for i in indices:
        v = wu_class(p, table, i).cls
        for x in ring.degree_basis(p.dim - i).basis:
            lhs = ring.top_coordinate(v * x.to_domain(v.domain)) if not v.is_zero() else table.domain.zero
            rhs = top_square(x, i, p, table)
            assert lhs == rhs, (name, i, str(x))


def test_wu_classes_of_eiii_under_assignment(eiii_mod2):
    p = eiii_mod2.specialise({"a": 1, "b": 1, "c": 1, "d": 0})
    table = complete_table(p)
    ring = mod2_ring(p)
    for i in range(1, 17):
        v = wu_class(p, table, i).cls
        for x in ring.degree_basis(p.dim - i).basis:
            lhs = ring.top_coordinate(v * x) if not v.is_zero() else 0
            assert lhs == top_square(x, i, p, table)


@pytest.mark.parametrize("name", ["RP2", "RP4", "CP2", "CP4", "HP2", "HP4", "OP2", "OP2xOP2", "EIII", "EIII-mod2", "EVI"])
def test_parity_consistency_on_the_corpus(name):
    assert parity_theorem_check(builtin(name)).consistent
