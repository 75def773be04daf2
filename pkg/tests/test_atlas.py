import random

import pytest
import sympy

from algebroids import atlas as at
from algebroids import lie
from algebroids.checks import predicted_first_failure
from algebroids.poly import Poly
from algebroids.sampling import rand_shear

SL2 = lie.make_sl(2)
x1, x2 = Poly.var(0, 2), Poly.var(1, 2)
one, z = Poly.const(1, 2), Poly.zero(2)
CHARTS = ["1", "2", "3"]


def family():
    g12 = lie.shear(0, 1, x1, 2)
    g23 = lie.shear(0, 1, x2, 2)
    return {("1", "2"): g12, ("2", "3"): g23, ("1", "3"): g12 * g23}


def sympy_chi(g, mu):
    """Oracle: coordinates of g d/dx_mu (g^-1) in sympy."""
    X = sympy.symbols("x1 x2")

    def conv(p):
        return sum(
            (sympy.Rational(c.numerator, c.denominator) * X[0] ** e[0] * X[1] ** e[1] for e, c in p.terms.items()),
            sympy.Integer(0),
        )

    G = sympy.Matrix(2, 2, [conv(p) for p in g.matrix])
    M = sympy.expand(G * G.inv().diff(X[mu]))
    # sl2 basis H, E, F
    return [M[0, 0], M[0, 1], M[1, 0]], conv


def test_chi_by_hand():
    g = lie.shear(0, 1, x1, 2)
    d1 = (one, z)
    assert at.chi_direct(SL2, g, d1) == (z, -one, z)
    assert at.chi_de_rham(SL2, g, d1) == (z, -one, z)


def test_chi_against_sympy():
    rng = random.Random(31)
    for _ in range(5):
        g = rand_shear(rng, 2, 2) * rand_shear(rng, 2, 2, max_degree=0)
        for mu in range(2):
            want, conv = sympy_chi(g, mu)
            field = tuple(one if k == mu else z for k in range(2))
            got = at.chi_de_rham(SL2, g, field)
            assert [sympy.expand(conv(p) - w) for p, w in zip(got, want)] == [0, 0, 0]


def test_alpha_is_adjoint_action():
    g = lie.shear(0, 1, x1, 2)
    t = at.transition_from_group(SL2, g, 2)
    # g H g^-1 = H - 2 x1 E
    assert t.apply_alpha((one, z, z)) == (one, -2 * x1, z)


def test_bundle_transitions_are_a_cocycle():
    t = at.transitions_from_bundle(SL2, CHARTS, family(), 2)
    assert at.validate_cocycle(t).ok
    assert at.automorphism_defects(t) == []


def test_perturbation_is_caught_at_the_predicted_triple():
    t = at.transitions_from_bundle(SL2, CHARTS, family(), 2)
    bad = at.perturb_chi(t, ("1", "2"), 0, (z, one, z))
    rep = at.validate_cocycle(bad)
    assert not rep.ok
    assert rep.first.triple == ("1", "2", "1")
    assert predicted_first_failure(CHARTS, ("1", "2")) == ("1", "2", "1")
    assert predicted_first_failure(CHARTS, ("2", "3")) == ("1", "2", "3")


def test_non_multiplicative_family_rejected():
    fam = family()
    fam[("1", "3")] = lie.identity_element(2, 2)
    with pytest.raises(at.NotMultiplicative):
        at.transitions_from_bundle(SL2, CHARTS, fam, 2)


def test_glue():
    t = at.transitions_from_bundle(SL2, CHARTS, family(), 2)
    X = (one, z)
    out = at.glue(t, X, {"2": (z, z, z)})
    # gamma_1 = alpha_12(0) + chi_12(d/dx1) = -E
    assert out.gammas["1"] == (z, -one, z)
    for i in CHARTS:
        for j in CHARTS:
            assert not any(at.gluing_defect(t, X, out.gammas, i, j))
    with pytest.raises(at.GlueError) as err:
        at.glue(t, X, {"2": (z, z, z), "1": (z, z, z)})
    assert err.value.pair in {("1", "2"), ("2", "1")}
    with pytest.raises(ValueError, match="unknown chart"):
        at.glue(t, X, {"9": (z, z, z)})
