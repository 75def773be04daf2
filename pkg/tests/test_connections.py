import random

import pytest

from algebroids import connections as cn
from algebroids import lie
from algebroids import matrices as mx
from algebroids.forms import FormSpace, endo_values, evaluate, kernel_values
from algebroids.poly import Poly
from algebroids.sampling import rand_element, rand_mixed, rand_potential_form, rand_shear

SL2 = lie.make_sl(2)
H, E, F = 0, 1, 2
x1, x2 = Poly.var(0, 2), Poly.var(1, 2)
one, z = Poly.const(1, 2), Poly.zero(2)


@pytest.fixture
def kr():
    return FormSpace(2, kernel_values(SL2))


def test_normalization_is_enforced(kr):
    ok = cn.connection_from_potential(cn.gauge_potential_from([(z, x1, z), (z, z, z)]), kr)
    assert cn.normalization_defect(ok.alpha).is_zero()
    with pytest.raises(cn.ConnectionShapeError, match="normalized"):
        cn.ConnectionForm(kr.dx(0, (one, z, z)))
    with pytest.raises(cn.ConnectionShapeError):
        cn.GaugePotential(((z, z, z),)).to_form(kr)


def test_abelian_curvature_by_hand():
    ab = lie.make_abelian(1)
    sp = FormSpace(2, kernel_values(ab))
    c = cn.connection_from_potential(cn.gauge_potential_from([(x2,), (Poly.zero(2),)]), sp)
    # d(x2 dx1) = -dx1 ^ dx2
    R = cn.curvature(c)
    assert R.bidegrees() == {(2, 0)}
    assert R.component(dx=(0, 1)) == (-one,)


def test_sl2_curvature_by_hand(kr):
    c = cn.connection_from_potential(cn.gauge_potential_from([(z, z, z), (z, x1, z)]), kr)
    R = cn.curvature(c)
    assert R.bidegrees() == {(2, 0)}
    assert R.component(dx=(0, 1)) == (z, one, z)
    assert cn.curvature_is_horizontal(c)
    assert cn.bianchi_defect(c).is_zero()


def test_flat_canonical_connection(kr):
    c = cn.ConnectionForm(-kr.tautological())
    assert cn.curvature(c).is_zero()
    assert cn.rep_curvature(cn.induce_rep_connection(c, lie.adjoint_rep(SL2))).is_zero()


def test_curvature_matches_pointwise_oracle(kr):
    rng = random.Random(5)
    for _ in range(5):
        c = cn.ConnectionForm(rand_potential_form(rng, kr) - kr.tautological())
        x, y = rand_element(rng, kr), rand_element(rng, kr)
        assert evaluate(cn.curvature(c), [x, y]) == cn.curvature_oracle(c, x, y)
        eta = rand_mixed(rng, kr, rng.randint(0, 2))
        assert cn.covariant_square_defect(c, eta).is_zero()


def test_generalized_curvature_has_theta_legs(kr):
    w = cn.GeneralizedConnectionForm(kr.theta(H, (one, z, z)))
    assert not cn.curvature_is_horizontal(w)
    assert cn.bianchi_defect(w).is_zero()


def test_induced_curvature_is_image(kr):
    rng = random.Random(6)
    rep = lie.defining_rep(SL2)
    w = cn.GeneralizedConnectionForm(rand_mixed(rng, kr, 1, 1))
    assert cn.rep_curvature(cn.induce_rep_connection(w, rep)) == cn.push_values(cn.curvature(w), rep)


def test_finite_gauge_pointwise_oracle():
    rng = random.Random(8)
    rep = lie.defining_rep(SL2)
    sp = FormSpace(2, endo_values(rep))
    for _ in range(5):
        w = cn.RepConnectionForm(rand_mixed(rng, sp, 1, 1))
        g = rand_shear(rng, 2, 2)
        wg = cn.finite_gauge(w, g)
        x = rand_element(rng, sp)
        gm, gi = g.matrix, g.inverse_matrix
        # x . g = X(g) + [rho(gamma), g]
        xg = sp.act(x, gm)
        want = mx.mat_add(mx.mat_mul(mx.mat_mul(gi, evaluate(w.omegaE, [x])), gm), mx.mat_mul(gi, xg))
        assert evaluate(wg.omegaE, [x]) == want
        assert cn.rep_curvature(wg) == cn.conjugate(cn.rep_curvature(w), g)


def test_infinitesimal_gauge_preserves_kind(kr):
    c = cn.ConnectionForm(-kr.tautological())
    xi = kr.function((z, x1, z))
    out = cn.infinitesimal_gauge(c, xi)
    assert isinstance(out, cn.ConnectionForm)
    # -theta is fixed up to the exact term d_M xi
    assert out.alpha - c.alpha == kr.dx(0, (z, one, z))
    with pytest.raises(cn.ConnectionShapeError):
        cn.infinitesimal_gauge(c, kr.dx(0, (z, one, z)))
