import pytest

from sqorient.services.basis import (
    betti_profile,
    coordinates_to_class,
    degree_basis,
    enumerate_monomials,
    graded_ring,
    mod2_reduce,
    normal_form,
    pairing,
    relation_slice,
    validate_presentation,
)
from sqorient.services.errors import (
    DegeneratePairing,
    DimensionOverflow,
    NotPoincare,
    TorsionPresent,
)
from sqorient.services.presentation import build_presentation

EVI_TOP = {
    "y2^16*y12*y20", "y2^14*y12^3", "y2^14*y16*y20", "y2^13*y3^2*y12*y20",
    "y2^10*y12^2*y20", "y2^8*y12*y16*y20", "y2^2*y20^3", "y12^4*y16",
    "y12^2*y20^2", "y12*y16^2*y20", "y16^4",
}


def test_cp2_basis(cp2):
    assert betti_profile(cp2) == (1, 0, 1, 0, 1)
    top = degree_basis(cp2, 4)
    assert [str(b) for b in top.basis] == ["x^2"]
    assert normal_form(cp2, cp2.parse("x^2")) == (1,)
    with pytest.raises(DimensionOverflow):
        degree_basis(cp2, 5)


def test_monomials_are_grevlex_ascending(eiii):
    monos = enumerate_monomials(eiii, 16)
    assert [eiii.gens.render_monomial(m) for m in monos] == ["t^8", "t^4*w", "w^2"]


def test_evi_betti_profile(evi):
    betti = betti_profile(evi)
    assert len(betti) == 65
    assert (betti[20], betti[32], betti[63], betti[64]) == (5, 7, 0, 1)
    assert sum(b if d % 2 == 0 else -b for d, b in enumerate(betti)) == 63


def test_evi_top_degree(evi):
    assert len(enumerate_monomials(evi, 64)) == 123
    assert len(relation_slice(evi, 64)) == 245
    top = degree_basis(evi, 64)
    assert top.rank == 1
    nonzero = {evi.gens.render_monomial(m) for m in top.monomials if top.coordinates(m) == (1,)}
    assert nonzero == EVI_TOP


def test_relation_slice_counts_distinct_products():
    p = build_presentation("overlap", [("x", 1), ("y", 1)], ["x^2", "x*y", "y^3"], dim=3)
    products = relation_slice(p, 3)
    assert sorted(str(r) for r in products) == sorted({"x^3", "x^2*y", "x*y^2", "y^3"})
    assert len(products) == len(set(products))


def test_eiii_integral_ranks(eiii):
    ring = graded_ring(eiii)
    ranks = [ring.degree_basis(d).rank for d in range(0, 33, 2)]
    assert ranks == [1, 1, 1, 1, 2, 2, 2, 2, 3, 2, 2, 2, 2, 1, 1, 1, 1]
    assert all(not ring.degree_basis(d).torsion for d in range(33))


@pytest.mark.parametrize(
    "degree, expected",
    [
        (26, {"t^13": 78, "t^9*w": 45, "t^5*w^2": 26, "t*w^3": 15}),
        (32, {"t^16": 78, "t^12*w": 45, "t^8*w^2": 26, "t^4*w^3": 15, "w^4": 9}),
    ],
)
def test_eiii_rank_one_coordinates(eiii, degree, expected):
    basis = degree_basis(eiii, degree)
    got = {eiii.gens.render_monomial(m): basis.coordinates(m)[0] for m in basis.monomials}
    assert {k: abs(v) for k, v in got.items()} == expected
    # first nonzero coordinate in grevlex order is positive
    first = next(v for m in basis.monomials if (v := basis.coordinates(m)[0]))
    assert first > 0


def test_eiii_degree_18_relation(eiii):
    basis = degree_basis(eiii, 18)
    assert basis.rank == 2
    # t^9 = 3 t w^2 in cohomology
    assert normal_form(eiii, eiii.parse("t^9")) == normal_form(eiii, eiii.parse("3*t*w^2"))


def test_coordinates_to_class_inverts_normal_form(eiii, evi):
    for p, d in ((eiii, 24), (evi, 20), (evi, 64)):
        for b in degree_basis(p, d).basis:
            coords = normal_form(p, b)
            assert coordinates_to_class(p, d, coords) == b


def test_pairings_are_invertible(evi):
    for i in (0, 2, 12, 20, 32):
        P = pairing(evi, i)
        assert len(P.matrix) == betti_profile(evi)[i]


def test_mod2_reduce_refuses_torsion():
    # Z[x]/(2x, x^2): H^2 = Z/2
    p = build_presentation("torsion", [("x", 2)], ["2*x", "x^2"], dim=2, mode="int")
    with pytest.raises(TorsionPresent):
        mod2_reduce(p)
    assert degree_basis(p, 2).torsion == (2,)


def test_validate_rejects_wrong_top():
    p = build_presentation("short", [("x", 2)], ["x^3"], dim=2)
    with pytest.raises(NotPoincare):
        validate_presentation(p)


def test_validate_rejects_asymmetric_betti():
    p = build_presentation("lopsided", [("x", 2), ("y", 4)], ["x^3", "y^2", "x*y"], dim=4)
    with pytest.raises(NotPoincare):
        validate_presentation(p)


def test_validate_rejects_degenerate_pairing():
    # x cups to zero with both degree-2 classes
    p = build_presentation("degenerate", [("x", 2), ("y", 2)], ["x^2", "x*y", "y^3"], dim=4)
    with pytest.raises((NotPoincare, DegeneratePairing)):
        validate_presentation(p)


def test_validate_returns_betti(cp2):
    assert validate_presentation(cp2) == (1, 0, 1, 0, 1)
