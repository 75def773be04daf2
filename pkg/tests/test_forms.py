import random

import pytest

from algebroids import lie
from algebroids.forms import (
    FormSpace,
    MixedForm,
    cartan_defects,
    differential,
    differential_via_koszul,
    endo_values,
    evaluate,
    graded_bracket,
    interior,
    kernel_operation,
    kernel_values,
    lie_derivative,
    scalar_values,
    sort_legs,
    tla_bracket,
    wedge,
)
from algebroids.poly import Poly
from algebroids.sampling import rand_element, rand_form, rand_mixed, rand_poly

SL2 = lie.make_sl(2)
H, E, F = 0, 1, 2


def spaces():
    out = []
    for alg in (SL2, lie.make_heisenberg(), lie.make_abelian(2)):
        out += [FormSpace(2, scalar_values(alg)), FormSpace(2, kernel_values(alg))]
    out.append(FormSpace(2, endo_values(lie.defining_rep(SL2))))
    return out


def ids(sp):
    return f"{sp.alg.name or 'abelian'}-{sp.kind}"


@pytest.fixture
def sc():
    return FormSpace(2, scalar_values(SL2))


@pytest.fixture
def kr():
    return FormSpace(2, kernel_values(SL2))


def test_sort_legs():
    assert sort_legs((2, 0, 1)) == (1, (0, 1, 2))
    assert sort_legs((1, 0)) == (-1, (0, 1))
    assert sort_legs((1, 1))[0] == 0


def test_dx_evaluation_is_a_determinant(sc):
    w = wedge(sc.dx(0), sc.dx(1))
    d1, d2 = sc.basis_element(0), sc.basis_element(1)
    assert evaluate(w, [d1, d2]) == (1,)
    assert evaluate(w, [d2, d1]) == (-1,)
    assert evaluate(w, [d1, d1]) == (0,)


def test_de_rham_part(sc):
    x2 = Poly.var(1, 2)
    w = sc.dx(0).scale(x2)
    dw = differential(w)
    assert evaluate(dw, [sc.basis_element(0), sc.basis_element(1)]) == (-1,)
    assert dw.bidegrees() == {(2, 0)}


def test_chevalley_eilenberg_part(sc):
    # d theta^k (e_i, e_j) = -theta^k([e_i, e_j]); [E, F] = H
    e, f = sc.basis_element(2 + E), sc.basis_element(2 + F)
    assert evaluate(differential(sc.theta(H)), [e, f]) == (-1,)
    # [H, E] = 2E
    h = sc.basis_element(2 + H)
    assert evaluate(differential(sc.theta(E)), [h, e]) == (-2,)


def test_kernel_valued_function(kr):
    f = kr.function(SL2.basis_vector(E, 2))
    h = kr.basis_element(2 + H)
    assert evaluate(differential(f), [h]) == tuple(2 * c for c in SL2.basis_vector(E, 2))


def test_tautological_form(kr):
    theta = kr.tautological()
    x = kr.element(gamma=[Poly.var(0, 2), Poly.const(3, 2), Poly.zero(2)])
    assert evaluate(theta, [x]) == x.gamma
    assert evaluate(theta, [kr.basis_element(0)]) == kr.zero_value()
    with pytest.raises(ValueError):
        FormSpace(2, scalar_values(SL2)).tautological()


def test_interior(sc):
    w = wedge(sc.dx(0), sc.dx(1))
    assert interior(sc.basis_element(0), w) == sc.dx(1)
    assert interior(sc.basis_element(1), w) == -sc.dx(0)


def test_tla_bracket_mixes_fields_and_kernel():
    nv = 2
    x1 = Poly.var(0, nv)
    one, z = Poly.const(1, nv), Poly.zero(nv)
    sp = FormSpace(2, kernel_values(SL2))
    X = sp.element([one, z])
    g = sp.element(None, [z, x1, z])
    br = tla_bracket(SL2, X, g)
    assert br.X == (z, z)
    assert br.gamma == (z, one, z)


def test_graded_commutativity_of_scalar_forms(sc):
    rng = random.Random(1)
    for _ in range(10):
        a, b = rng.randint(0, 2), rng.randint(0, 2)
        u, v = rand_mixed(rng, sc, a), rand_mixed(rng, sc, b)
        assert wedge(u, v) == wedge(v, u).scale((-1) ** (a * b))


def test_leibniz_rule_for_scalar_wedge(sc):
    rng = random.Random(2)
    for _ in range(10):
        p = rng.randint(0, 2)
        u, v = rand_mixed(rng, sc, p), rand_mixed(rng, sc, rng.randint(0, 1))
        lhs = differential(wedge(u, v))
        rhs = wedge(differential(u), v) + wedge(u, differential(v)).scale((-1) ** p)
        assert lhs == rhs


def test_kernel_bracket_symmetry(kr):
    rng = random.Random(3)
    for _ in range(10):
        a, b = rng.randint(0, 2), rng.randint(0, 2)
        u, v = rand_mixed(rng, kr, a), rand_mixed(rng, kr, b)
        assert graded_bracket(u, v) == -graded_bracket(v, u).scale((-1) ** (a * b))


@pytest.mark.parametrize("sp", spaces(), ids=ids)
def test_d_squared_and_koszul(sp):
    rng = random.Random(sp.kind + str(sp.m))
    for p in range(3):
        for q in range(3 - p):
            w = rand_form(rng, sp, p, q)
            assert differential(differential(w)).is_zero()
            args = [rand_element(rng, sp) for _ in range(p + q + 1)]
            assert evaluate(differential(w), args) == differential_via_koszul(w, args)


@pytest.mark.parametrize("sp", spaces(), ids=ids)
def test_cartan_relations(sp):
    rng = random.Random(7)
    for _ in range(4):
        x, y = rand_element(rng, sp), rand_element(rng, sp)
        w = rand_mixed(rng, sp, rng.randint(0, 2))
        for name, defect in cartan_defects(sp, x, y, rand_poly(rng, 2, 1), w).items():
            assert defect.is_zero(), name


def test_lie_derivative_of_function_is_action(kr):
    rng = random.Random(4)
    x = rand_element(rng, kr)
    v = tuple(rand_poly(rng, 2) for _ in range(3))
    assert lie_derivative(x, kr.function(v)) == kr.function(kr.act(x, v))


def test_horizontality(kr):
    op = kernel_operation(kr)
    assert op.is_horizontal(kr.dx(0, SL2.basis_vector(H, 2)))
    assert not op.is_horizontal(kr.tautological())


def test_shape_errors(sc, kr):
    with pytest.raises(ValueError):
        sc.dx(0) + wedge(sc.dx(0), sc.dx(1))
    with pytest.raises(ValueError):
        MixedForm(sc, 1, {(0, 1): (Poly.const(1, 2),)})
    with pytest.raises(ValueError):
        evaluate(sc.dx(0), [])
    with pytest.raises(ValueError):
        wedge(kr.tautological(), kr.tautological())
