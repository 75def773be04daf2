import random

import pytest

from algebroids import connections as cn
from algebroids.atiyah import (
    AtiyahModel,
    NotBasicError,
    UnipotentGroup,
    connection_hat,
    group_law_defects,
    lambda_restrict,
    maurer_cartan_on_P,
    reconstruct,
)
from algebroids.forms import differential, graded_bracket
from algebroids.poly import Poly
from algebroids.sampling import rand_mixed, rand_potential_form


@pytest.fixture(scope="module")
def model():
    return AtiyahModel(2, UnipotentGroup(3))


def test_heisenberg_group_law_by_hand():
    G = UnipotentGroup(3)
    nv = 6
    y = [Poly.var(i, nv) for i in range(3)]
    z = [Poly.var(3 + i, nv) for i in range(3)]
    # coordinates (E12, E23, E13): the E13 entry picks up y1 z2
    assert G.law(y, z) == [y[0] + z[0], y[1] + z[1], y[2] + z[2] + y[0] * z[1]]
    assert G.positions == [(0, 1), (1, 2), (0, 2)]


@pytest.mark.parametrize("n", [2, 3, 4])
def test_group_law(n):
    assert group_law_defects(UnipotentGroup(n)) == []


def test_fundamental_fields_represent_bracket(model):
    assert model.fundamental_bracket_defects() == []


def test_maurer_cartan_form_is_flat(model):
    mc = maurer_cartan_on_P(model)
    w = mc.dy_part
    # d(g^-1 dg) + 1/2 [g^-1 dg, g^-1 dg] = 0 on P
    half = Poly.const(1, model.nvars) / 2
    assert (differential(w).part(2, 0) + graded_bracket(w, w).scale(half)).is_zero()


def test_connection_hat_is_basic_and_restricts(model):
    rng = random.Random(21)
    B = model.base_space
    for _ in range(3):
        A = rand_potential_form(rng, B)
        w = connection_hat(model, A)
        assert model.g_equ.is_basic(w)
        lam = lambda_restrict(model, w)
        assert lam == A - B.tautological()
        assert reconstruct(model, lam) == w


def test_curvature_correspondence(model):
    rng = random.Random(22)
    B = model.base_space
    A = rand_potential_form(rng, B)
    F_hat = cn.curvature(cn.GeneralizedConnectionForm(connection_hat(model, A)))
    F = lambda_restrict(model, F_hat)
    assert F.bidegrees() <= {(2, 0)}
    half = Poly.const(1, B.nvars) / 2
    assert F == differential(A).part(2, 0) + graded_bracket(A, A).scale(half)


def test_lambda_is_a_chain_map_on_reconstructed_forms(model):
    rng = random.Random(23)
    for _ in range(3):
        v = rand_mixed(rng, model.base_space, rng.randint(0, 2), max_degree=1)
        r = reconstruct(model, v)
        assert lambda_restrict(model, differential(r)) == differential(v)


def test_lambda_rejects_non_basic(model):
    with pytest.raises(NotBasicError):
        lambda_restrict(model, model.p_space.tautological())
    with pytest.raises(ValueError):
        reconstruct(model, model.p_space.zero(1))
