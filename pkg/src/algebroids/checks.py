"""Named checks run by the scenario runner.

Each check takes a :class:`Scenario` and a seeded ``random.Random`` and either
returns a short detail string or raises :class:`CheckFailed` carrying a
serialized witness.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import product
from typing import Callable

from . import atlas as at
from . import connections as cn
from . import lie
from . import matrices as mx
from . import ncg
from .atiyah import (
    connection_hat,
    group_law_defects,
    lambda_restrict,
    maurer_cartan_on_P,
    reconstruct,
    generalized_split,
)
from .forms import (
    MixedForm,
    cartan_defects,
    differential,
    differential_via_koszul,
    evaluate,
    graded_bracket,
    kernel_operation,
    lie_derivative,
)
from .poly import Poly, apply_field
from .sampling import (
    rand_element,
    rand_form,
    rand_gamma,
    rand_matrix,
    rand_mixed,
    rand_poly,
    rand_potential_form,
    rand_shear,
)
from .serialize import form_to_record, value_summary


class CheckFailed(Exception):
    def __init__(self, detail: str, witness=None):
        super().__init__(detail)
        self.detail = detail
        self.witness = witness


def _witness(obj):
    if isinstance(obj, MixedForm):
        return form_to_record(obj)
    if isinstance(obj, tuple) and obj and isinstance(obj[0], Poly):
        return value_summary(obj)
    return str(obj)


def expect_zero(label: str, obj) -> None:
    if isinstance(obj, MixedForm):
        bad = not obj.is_zero()
    else:
        bad = any(obj)
    if bad:
        raise CheckFailed(f"{label} is not zero", _witness(obj))


def expect_equal(label: str, a, b) -> None:
    if a != b:
        diff = a - b if isinstance(a, MixedForm) else tuple(x - y for x, y in zip(a, b))
        raise CheckFailed(f"{label}: the two sides differ", _witness(diff))


def expect(label: str, cond: bool, witness=None) -> None:
    if not cond:
        raise CheckFailed(label, witness)


@dataclass(frozen=True)
class Check:
    name: str
    anchor: str
    module: str
    run: Callable


REGISTRY: dict[str, Check] = {}


def check(name: str, anchor: str, module: str):
    def deco(fn):
        REGISTRY[name] = Check(name, anchor, module, fn)
        return fn

    return deco


# -- helpers ---------------------------------------------------------------------------------

def _potential(sc, rng: random.Random) -> MixedForm:
    return sc.potential if sc.potential is not None else rand_potential_form(rng, sc.space("kernel"))


def _connections(sc, rng: random.Random, extra: int = 2) -> list[cn.ConnectionForm]:
    sp = sc.space("kernel")
    pots = [_potential(sc, rng)] + [rand_potential_form(rng, sp) for _ in range(extra)]
    return [cn.ConnectionForm(A - sp.tautological()) for A in pots]


def _bidegrees(sp, top: int = 3):
    return [(p, q) for p in range(sp.base_dim + 1) for q in range(sp.m + 1) if 0 < p + q <= top] + [(0, 0)]


def _value_spaces(sc):
    kinds = ["scalar", "kernel", "endo"]
    return [sc.space(k) for k in kinds]


def _endo_sl_space(sc):
    return ncg.endo_space(sc.d, sc.matrix_n)


# -- algebra_core -------------------------------------------------------------------------------

@check("jacobi", "Jacobi identity of the structure constants and of the pointwise bracket", "algebra_core")
def _jacobi(sc, rng):
    expect("structure constants are not antisymmetric", lie.is_antisymmetric(sc.alg))
    expect("Jacobi identity fails on a basis triple", lie.validate_jacobi(sc.alg))
    expect("matrix basis does not reproduce the structure constants", lie.matrix_basis_consistent(sc.alg))
    expect("representation is not a Lie morphism", not lie.representation_defects(sc.rep))
    nv = sc.d
    for _ in range(sc.samples):
        a, b, c = (rand_gamma(rng, sc.alg, nv) for _ in range(3))
        br = lambda u, v: lie.bracket_gamma(sc.alg, u, v)  # noqa: E731
        cyc = [br(br(a, b), c), br(br(b, c), a), br(br(c, a), b)]
        expect_zero("pointwise Jacobi sum", tuple(x + y + z for x, y, z in zip(*cyc)))
        expect_zero("[a, a]", br(a, a))
        m = rand_matrix(rng, sc.rep.n, nv)
        t = lie.traceless_projection(m)
        expect_zero("trace of the traceless projection", (mx.trace(t),))
        expect_equal("traceless projection is idempotent", lie.traceless_projection(t), t)
        X = tuple(rand_poly(rng, nv, 1) for _ in range(nv))
        f, g = rand_poly(rng, nv), rand_poly(rng, nv)
        expect_equal("vector field Leibniz rule", (apply_field(X, f * g),), (apply_field(X, f) * g + f * apply_field(X, g),))
    return f"dim {sc.alg.dim}, {sc.samples} pointwise samples"


# -- tla_forms ---------------------------------------------------------------------------------

@check("d_squared", "the total differential squares to zero", "tla_forms")
def _d_squared(sc, rng):
    count = 0
    for sp in _value_spaces(sc):
        for p, q in _bidegrees(sp):
            for _ in range(sc.samples):
                w = rand_form(rng, sp, p, q)
                expect_zero(f"d d w for a {sp.kind} form of bidegree ({p}, {q})", differential(differential(w)))
                count += 1
    return f"{count} forms"


@check("koszul_agreement", "componentwise differential agrees with the Koszul formula", "tla_forms")
def _koszul(sc, rng):
    for sp in _value_spaces(sc):
        for _ in range(sc.samples):
            r = rng.randint(0, 2)
            w = rand_mixed(rng, sp, r)
            args = [rand_element(rng, sp) for _ in range(r + 1)]
            expect_equal(f"d w on random arguments ({sp.kind})", evaluate(differential(w), args), differential_via_koszul(w, args))
    return f"{3 * sc.samples} samples"


@check("cartan_relations", "the four relations of a Cartan operation", "tla_forms")
def _cartan(sc, rng):
    for sp in _value_spaces(sc):
        for _ in range(sc.samples):
            x, y = rand_element(rng, sp), rand_element(rng, sp)
            f = rand_poly(rng, sp.nvars, 1)
            w = rand_mixed(rng, sp, rng.randint(0, 2))
            for rel, defect in cartan_defects(sp, x, y, f, w).items():
                expect_zero(f"{rel} ({sp.kind})", defect)
    op = kernel_operation(sc.space("kernel"))
    sp = sc.space("scalar")
    expect("pure dx forms are horizontal for the kernel", op.is_horizontal(rand_form(rng, sc.space("kernel"), 1, 0)))
    expect("theta^1 must not be horizontal", not op.is_horizontal(sp.theta(0)) if sp.m else True)
    return f"{3 * sc.samples} element pairs"


# -- connections -------------------------------------------------------------------------------

@check("normalization", "a connection 1-form sends 0 + l to -l", "connections")
def _normalization(sc, rng):
    sp = sc.space("kernel")
    for c in _connections(sc, rng, extra=sc.samples - 1):
        expect_zero("normalization defect", cn.normalization_defect(c.alpha))
        f = rand_poly(rng, sp.nvars)
        for a in range(sp.m):
            ell = tuple(f * x for x in sc.alg.basis_vector(a, sp.nvars))
            val = evaluate(c.alpha, [sp.element(None, ell)])
            expect_equal("alpha(0 + f e_a) = -f e_a", val, tuple(-x for x in ell))
        x = rand_element(rng, sp)
        A = c.alpha + sp.tautological()
        lhs = evaluate(c.alpha, [x])
        rhs = tuple(a - g for a, g in zip(evaluate(A, [x]), x.gamma))
        expect_equal("alpha(X + gamma) = A(X) - gamma", lhs, rhs)
    return f"{sc.samples} potentials"


@check("curvature_oracle", "curvature equals d alpha + 1/2 [alpha, alpha] evaluated pointwise", "connections")
def _curvature_oracle(sc, rng):
    sp = sc.space("kernel")
    for c in _connections(sc, rng):
        R = cn.curvature(c)
        for _ in range(sc.samples):
            x, y = rand_element(rng, sp), rand_element(rng, sp)
            expect_equal("curvature on (x, y)", evaluate(R, [x, y]), cn.curvature_oracle(c, x, y))
    return "3 connections"


@check("curvature_horizontal", "the curvature of a connection is horizontal for the kernel", "connections")
def _curvature_horizontal(sc, rng):
    for c in _connections(sc, rng):
        R = cn.curvature(c)
        expect("curvature has theta legs", R.bidegrees() <= {(2, 0)}, _witness(R))
        expect("curvature is not horizontal", cn.curvature_is_horizontal(c), _witness(R))
    return "3 connections"


@check("bianchi", "It satisfies the Bianchi identity", "connections")
def _bianchi(sc, rng):
    for c in _connections(sc, rng):
        expect_zero("d R + [alpha, R]", cn.bianchi_defect(c))
        expect_zero("D R", cn.covariant_differential(c, cn.curvature(c)))
    return "3 connections"


@check("covariant_square", "D D eta = [R, eta]", "connections")
def _covariant_square(sc, rng):
    sp = sc.space("kernel")
    c = _connections(sc, rng, extra=0)[0]
    for _ in range(sc.samples):
        eta = rand_mixed(rng, sp, rng.randint(0, 2))
        expect_zero("D D eta - [R, eta]", cn.covariant_square_defect(c, eta))
    return f"{sc.samples} forms eta"


@check("flat_canonical", "alpha = -theta is flat", "connections")
def _flat(sc, rng):
    sp = sc.space("kernel")
    alpha = -sp.tautological()
    c = cn.ConnectionForm(alpha)
    expect_zero("curvature of -theta", cn.curvature(c))
    expect_zero("Bianchi defect of -theta", cn.bianchi_defect(c))
    for _ in range(min(sc.samples, 5)):
        x, y = rand_element(rng, sp), rand_element(rng, sp)
        expect_zero("Koszul curvature of -theta", cn.curvature_oracle(c, x, y))
    rep = lie.adjoint_rep(sc.alg)
    expect_zero("induced curvature of -theta", cn.rep_curvature(cn.induce_rep_connection(c, rep)))
    return "zero curvature"


@check("infinitesimal_gauge", "infinitesimal gauge action is minus the Lie derivative", "connections")
def _inf_gauge(sc, rng):
    sp = sc.space("kernel")
    cs = _connections(sc, rng)
    for _ in range(sc.samples):
        c = cs[rng.randrange(len(cs))]
        xi = sp.function(rand_gamma(rng, sc.alg, sp.nvars))
        new = cn.infinitesimal_gauge(c, xi)
        expect_zero("normalization after gauge", cn.normalization_defect(new.alpha))
        xi_el = sp.element(None, xi.comps.get((), sp.zero_value()))
        expect_equal("L_xi alpha = -(alpha^xi - alpha)", lie_derivative(xi_el, c.alpha), -(new.alpha - c.alpha))
        g = cn.infinitesimal_gauge(cn.embed_ordinary_as_A_connection(c), xi)
        expect_equal("gauge commutes with the inclusion into generalized connections", g.omega, new.alpha)
        w = cn.GeneralizedConnectionForm(rand_mixed(rng, sp, 1, 1))
        x = rand_element(rng, sp)
        wx = evaluate(w.omega, [x])
        xi_v = xi_el.gamma
        pointwise = tuple(
            a + b + c for a, b, c in zip(wx, sp.act(x, xi_v), sc.alg.bracket(wx, xi_v))
        )
        expect_equal("generalized: omega^xi(x) = omega(x) + x.xi + [omega(x), xi]",
                     evaluate(cn.infinitesimal_gauge(w, xi).omega, [x]), pointwise)
    zero = sp.function(sp.zero_value())
    expect_equal("xi = 0 acts trivially", cn.infinitesimal_gauge(cs[0], zero).alpha, cs[0].alpha)
    return f"{sc.samples} gauge parameters"


@check("rep_curvature_square", "induced representation connections carry the image curvature", "connections")
def _rep_square(sc, rng):
    sp = sc.space("kernel")
    for rep in (sc.rep, lie.adjoint_rep(sc.alg)):
        for _ in range(sc.samples):
            w = cn.GeneralizedConnectionForm(rand_mixed(rng, sp, 1, 1))
            wE = cn.induce_rep_connection(w, rep)
            expect_equal("rep curvature vs image of curvature", cn.rep_curvature(wE), cn.push_values(cn.curvature(w), rep))
            expect_zero("rep Bianchi defect", cn.rep_bianchi_defect(wE))
    return f"{2 * sc.samples} generalized connections"


@check("finite_gauge_curvature", "finite gauge transforms conjugate the curvature", "connections")
def _finite_gauge(sc, rng):
    sp = sc.space("endo")
    n = sc.rep.n
    gs = list(sc.gauge_elements) + [rand_shear(rng, n, sp.nvars) for _ in range(min(sc.samples, 10))]
    gs = [g for g in gs if g.n == n]
    for g in gs:
        w = cn.RepConnectionForm(rand_mixed(rng, sp, 1, 1))
        wg = cn.finite_gauge(w, g)
        expect_equal("R(omega^g) = g^-1 R g", cn.rep_curvature(wg), cn.conjugate(cn.rep_curvature(w), g))
        h = rand_shear(rng, n, sp.nvars, max_degree=0)
        expect_equal("(omega^g)^h = omega^(gh)", cn.finite_gauge(wg, h).omegaE, cn.finite_gauge(w, g * h).omegaE)
        expect_equal("identity acts trivially", cn.finite_gauge(w, lie.identity_element(n, sp.nvars)).omegaE, w.omegaE)
        diff = cn.rep_connection_difference(wg, w)
        expect_equal("affine structure", cn.translate(w, diff).omegaE, wg.omegaE)
    return f"{len(gs)} gauge elements"


# -- ncg -----------------------------------------------------------------------------------------

def _ncg_sizes(sc):
    return sorted({2, sc.matrix_n}) if sc.matrix_n <= 3 else [sc.matrix_n]


@check("maurer_cartan_matrix", "d′(iθ) − (iθ)² = 0", "ncg")
def _mc(sc, rng):
    out = []
    for n in _ncg_sizes(sc):
        expect_zero(f"d'(i theta) - (i theta)^2 for n = {n}", ncg.maurer_cartan_defect(n))
        it = ncg.canonical_itheta(n)
        alg = lie.make_sl(n)
        for a, e in enumerate(alg.matrix_basis):
            val = evaluate(it, [ncg.inner_derivation(n, e)])
            expect_equal("i theta reproduces the basis", val, mx.const_matrix(e, 0))
        out.append(str(n))
    return "n = " + ", ".join(out)


@check("itheta_degree0", "d′a = [iθ, a] on matrices, and every derivation of M_n is inner", "ncg")
def _itheta0(sc, rng):
    for n in _ncg_sizes(sc):
        for w in ncg.basis_forms(n, 0):
            expect_zero("d'a - [i theta, a]", ncg.inner_defect(w))
        expect(f"der(M_{n}) has the wrong dimension", ncg.derivation_space_dimension(n) == n * n - 1)
        expect(f"ad: sl_{n} -> der(M_{n}) is not injective", ncg.inner_derivation_rank(n) == n * n - 1)
    return "full matrix basis"


@check("higher_degree_witness", "the degree-0 relation fails in degree 1", "ncg")
def _witness_check(sc, rng):
    for n in _ncg_sizes(sc):
        w, defect = ncg.higher_degree_witness(n)
        expect("witness defect must be nonzero", not defect.is_zero())
        expect("witness defect must be a 2-form", defect.degree == 2)
    return "witness found"


def _nc_sample(sc, rng):
    sp = _endo_sl_space(sc)
    return sp, ncg.NCConnection(rand_mixed(rng, sp, 1, 1))


@check("nc_curvature_operator", "operator curvature equals the curvature 2-form", "ncg")
def _nc_curv(sc, rng):
    sp = _endo_sl_space(sc)
    n = sc.matrix_n
    zero = ncg.NCConnection(sp.zero(1))
    expect_zero("curvature of omega = 0", ncg.nc_curvature(zero))
    for _ in range(sc.samples):
        _, c = _nc_sample(sc, rng)
        x, y = rand_element(rng, sp), rand_element(rng, sp)
        a = rand_matrix(rng, n, sp.nvars)
        Om = ncg.nc_curvature(c)
        nabla = ncg.nc_connection_apply
        expect_equal(
            "R(x, y) a = Omega(x, y) a",
            ncg.nc_curvature_operator(c, x, y, a),
            mx.mat_mul(evaluate(Om, [x, y]), a),
        )
        m = rand_matrix(rng, n, sp.nvars)
        ma = mx.mat_mul(m, a)
        rhs = mx.mat_add(mx.mat_mul(m, sp.act(x, a)), mx.mat_mul(nabla(c, x, m), a))
        expect_equal("Leibniz rule of the connection", nabla(c, x, ma), rhs)
    return f"{sc.samples} tuples"


@check("nc_gauge_conjugation", "gauge transforms of NC connections conjugate the curvature", "ncg")
def _nc_gauge(sc, rng):
    sp = _endo_sl_space(sc)
    n = sc.matrix_n
    gs = [g for g in sc.gauge_elements if g.n == n] + [rand_shear(rng, n, sp.nvars) for _ in range(min(sc.samples, 10))]
    for g in gs:
        _, c = _nc_sample(sc, rng)
        cg = ncg.nc_gauge(c, g)
        expect_equal("Omega^g = g^-1 Omega g", ncg.nc_curvature(cg), cn.conjugate(ncg.nc_curvature(c), g))
        expect_equal(
            "operator gauge agrees with g^-1 omega g + g^-1 d g",
            cg.omega,
            cn.finite_gauge(cn.RepConnectionForm(c.omega), g).omegaE,
        )
        h = rand_shear(rng, n, sp.nvars, max_degree=0)
        expect_equal("right action", ncg.nc_gauge(cg, h).omega, ncg.nc_gauge(c, g * h).omega)
        c0 = ncg.NCConnection(rand_mixed(rng, sp, 1, 0))
        gh = g * h
        expect_equal(
            "Omega^(gh) = (gh)^-1 Omega (gh)",
            ncg.nc_curvature(ncg.nc_gauge(c0, gh)),
            cn.conjugate(ncg.nc_curvature(c0), gh),
        )
    return f"{len(gs)} gauge elements"


@check("theorem_three_spaces", "The following three spaces are isomorphic", "ncg")
def _theorem_one(sc, rng):
    sp = _endo_sl_space(sc)
    n = sc.matrix_n
    tags = ncg.CONNECTION_SPACES
    for _ in range(sc.samples):
        w = rand_mixed(rng, sp, 1, 1)
        g = rand_shear(rng, n, sp.nvars)
        for src, dst in product(tags, repeat=2):
            there = ncg.convert_connection(src, dst, w)
            expect_equal(f"{src} -> {dst} -> {src}", ncg.convert_connection(dst, src, there), w)
            expect_equal(
                f"curvature commutes with {src} -> {dst}",
                ncg.convert_form(src, dst, ncg.curvature_in(src, w)),
                ncg.curvature_in(dst, there),
            )
            expect_equal(
                f"gauge commutes with {src} -> {dst}",
                ncg.convert_connection(src, dst, ncg.finite_gauge_in(src, w, g)),
                ncg.finite_gauge_in(dst, there, g),
            )
    return f"{sc.samples} payloads"


@check("theorem_traceless", "generalized connections correspond to traceless NC connections", "ncg")
def _theorem_two(sc, rng):
    sp_end = _endo_sl_space(sc)
    alg = sp_end.alg
    from .forms import FormSpace, kernel_values

    sp = FormSpace(sc.d, kernel_values(alg))
    tags = ncg.GENERALIZED_SPACES
    for _ in range(sc.samples):
        w = rand_mixed(rng, sp, 1, 1)
        xi = sp.function(rand_gamma(rng, alg, sp.nvars))
        for src, dst in product(tags, repeat=2):
            payload = ncg.convert_connection(tags[0], src, w)
            xi_src = ncg.convert_form(tags[0], src, xi)
            there = ncg.convert_connection(src, dst, payload)
            if dst == "traceless_nc":
                expect("converted form is not traceless", ncg.is_traceless(there))
            expect_equal(f"{src} -> {dst} -> {src}", ncg.convert_connection(dst, src, there), payload)
            expect_equal(
                f"curvature commutes with {src} -> {dst}",
                ncg.convert_form(src, dst, ncg.curvature_in(src, payload)),
                ncg.curvature_in(dst, there),
            )
            expect_equal(
                f"infinitesimal gauge commutes with {src} -> {dst}",
                ncg.convert_connection(src, dst, ncg.infinitesimal_gauge_in(src, payload, xi_src)),
                ncg.infinitesimal_gauge_in(dst, there, ncg.convert_form(src, dst, xi_src)),
            )
    bad = sp_end.dx(0, mx.identity(sc.matrix_n, sp_end.nvars))
    expect("identity-valued form must not count as traceless", not ncg.is_traceless(bad))
    return f"{sc.samples} payloads"


# -- atiyah_model --------------------------------------------------------------------------------

@check("atiyah_group_law", "polynomial group law, inverse and adjoint action", "atiyah_model")
def _group_law(sc, rng):
    model = sc.atiyah
    bad = group_law_defects(model.G)
    expect("group law defects", not bad, bad)
    expect("fundamental fields do not represent the bracket", not model.fundamental_bracket_defects())
    return f"n = {model.G.n}"


@check("atiyah_cartan_relations", "g_equ is a Cartan operation on forms over P", "atiyah_model")
def _atiyah_cartan(sc, rng):
    model = sc.atiyah
    sp = model.p_space
    gens = model.g_equ.generators
    for _ in range(sc.samples):
        x, y = gens[rng.randrange(len(gens))], gens[rng.randrange(len(gens))]
        f = rand_poly(rng, sp.nvars, 1)
        w = rand_mixed(rng, sp, rng.randint(0, 2), max_degree=1)
        for rel, defect in cartan_defects(sp, x, y, f, w).items():
            expect_zero(f"g_equ: {rel}", defect)
    return f"{sc.samples} samples"


def _atiyah_potentials(sc, rng, count):
    model = sc.atiyah
    out = []
    if sc.potential is not None and sc.potential.space == model.base_space:
        out.append(sc.potential)
    while len(out) < count:
        out.append(rand_potential_form(rng, model.base_space))
    return out


@check("atiyah_basic", "omega - theta is g_equ-basic", "atiyah_model")
def _atiyah_basic(sc, rng):
    model = sc.atiyah
    op = model.g_equ
    mc = maurer_cartan_on_P(model)
    expect("Maurer-Cartan dy part is not invariant", op.is_invariant(mc.dy_part), _witness(mc.dy_part))
    expect("tautological part is not invariant", op.is_invariant(mc.tautological))
    for A in _atiyah_potentials(sc, rng, min(sc.samples, 10)):
        w = connection_hat(model, A)
        expect("connection_hat is not basic", op.is_basic(w), _witness(w))
        expect("d of a basic form is not basic", op.is_basic(differential(w)))
        om, phi = generalized_split(model, w)
        expect("split parts are not invariant", op.is_invariant(om) and op.is_invariant(phi))
        expect_equal("theta part of connection_hat", phi, -mc.tautological)
    return f"{min(sc.samples, 10)} potentials"


@check("atiyah_lambda", "restriction to the identity section is a chain isomorphism on basic forms", "atiyah_model")
def _atiyah_lambda(sc, rng):
    model = sc.atiyah
    B = model.base_space
    for A in _atiyah_potentials(sc, rng, min(sc.samples, 10)):
        w = connection_hat(model, A)
        lam = lambda_restrict(model, w)
        expect_equal("lambda(connection_hat(A)) = A - theta", lam, A - B.tautological())
        expect_equal("reconstruct(A - theta) = connection_hat(A)", reconstruct(model, lam), w)
        expect_equal("lambda commutes with d", lambda_restrict(model, differential(w)), differential(lam))
    for _ in range(sc.samples):
        v = rand_mixed(rng, B, rng.randint(0, 2), max_degree=1)
        r = reconstruct(model, v)
        expect("reconstructed form is not basic", model.g_equ.is_basic(r), _witness(r))
        expect_equal("lambda(reconstruct(v)) = v", lambda_restrict(model, r), v)
        expect_equal("reconstruct(lambda(r)) = r", reconstruct(model, lambda_restrict(model, r, check=False)), r)
    expect_zero("reconstruct(0)", reconstruct(model, B.zero(1)))
    return f"{sc.samples} forms"


@check("atiyah_curvature", "curvature correspondence between P and the base", "atiyah_model")
def _atiyah_curvature(sc, rng):
    model = sc.atiyah
    B = model.base_space
    for A in _atiyah_potentials(sc, rng, min(sc.samples, 10)):
        w = connection_hat(model, A)
        F_hat = cn.curvature(cn.GeneralizedConnectionForm(w))
        expect("curvature on P is not basic", model.g_equ.is_basic(F_hat), _witness(F_hat))
        F = lambda_restrict(model, F_hat)
        direct = differential(A).part(2, 0) + graded_bracket(A, A).scale(Poly.const(1, B.nvars) / 2)
        expect_equal("lambda(F_hat) = dA + 1/2 [A, A]", F, direct)
        expect("curvature has mixed components", F.bidegrees() <= {(2, 0)}, _witness(F))
        expect_equal("lambda(F_hat) = curvature(A - theta)", F, cn.curvature(cn.ConnectionForm(A - B.tautological())))
    return f"{min(sc.samples, 10)} potentials"


# -- atlas ----------------------------------------------------------------------------------------

def _default_family(sc, rng):
    alg = sc.alg
    n = alg.matrix_size
    if sc.atlas is not None and sc.atlas.family:
        return sc.atlas.charts, sc.atlas.family
    g12 = rand_shear(rng, n, sc.d)
    g23 = rand_shear(rng, n, sc.d)
    return ("1", "2", "3"), {("1", "2"): g12, ("2", "3"): g23, ("1", "3"): g12 * g23}


def predicted_first_failure(charts, pair):
    """Earliest triple whose cocycle relation sees a shift of ``chi`` on ``pair``.

    On ``(a, b, c)`` the shift enters as ``[ac = ij] - [bc = ij] alpha_ab - [ab = ij]``.
    """
    for a, b, c in product(charts, repeat=3):
        lhs = (a, c) == pair
        mid = (b, c) == pair
        right = (a, b) == pair
        # alpha_ab = id exactly when a == b
        if mid and a == b:
            net = int(lhs) - 1 - int(right)
        else:
            net = None if mid else int(lhs) - int(right)
        if net is None or net != 0:
            return (a, b, c)
    return None


@check("atlas_cocycle", "cocycle relations of transition data", "atlas")
def _atlas_cocycle(sc, rng):
    charts, fam = _default_family(sc, rng)
    t = at.transitions_from_bundle(sc.alg, charts, fam, sc.d)
    rep = at.validate_cocycle(t)
    expect("bundle transitions fail the cocycle check", rep.ok, rep.first and rep.first.triple)
    expect("alpha_ij is not an automorphism", not at.automorphism_defects(t))
    single = at.transitions_from_bundle(sc.alg, charts[:1], {}, sc.d)
    expect("single chart must validate", at.validate_cocycle(single).ok)
    if sc.atlas is not None and sc.atlas.perturb is not None:
        pair, mu, delta = sc.atlas.perturb
    else:
        pair, mu = (charts[0], charts[1]), 0
        delta = tuple(Poly.const(1 if a == 0 else 0, sc.d) for a in range(sc.alg.dim))
    bad = at.perturb_chi(t, pair, mu, delta)
    rep = at.validate_cocycle(bad)
    expect("perturbed data must fail", not rep.ok)
    want = predicted_first_failure(list(charts), pair)
    expect(f"first failing triple {rep.first.triple} differs from {want}", rep.first.triple == want)
    return f"perturbation caught at {rep.first.triple}"


@check("atlas_glue", "gluing of local kernel components", "atlas")
def _atlas_glue(sc, rng):
    charts, fam = _default_family(sc, rng)
    t = at.transitions_from_bundle(sc.alg, charts, fam, sc.d)
    nv = sc.d
    for _ in range(sc.samples):
        X = tuple(rand_poly(rng, nv, 1) for _ in range(nv))
        start = charts[rng.randrange(len(charts))]
        g0 = rand_gamma(rng, sc.alg, nv)
        fam_out = at.glue(t, X, {start: g0})
        for i, j in product(charts, repeat=2):
            tr = t.get(i, j)
            rhs = tuple(a + b for a, b in zip(tr.apply_alpha(fam_out.gammas[j]), tr.apply_chi(X)))
            expect_equal(f"gamma_{i} = alpha_{i}{j}(gamma_{j}) + chi_{i}{j}(X)", fam_out.gammas[i], rhs)
        again = at.glue(t, X, dict(fam_out.gammas))
        expect("over-determined consistent data rejected", again.gammas == fam_out.gammas)
        if len(charts) > 1:
            broken = dict(fam_out.gammas)
            other = charts[1] if start == charts[0] else charts[0]
            broken[other] = tuple(x + 1 for x in broken[other])
            try:
                at.glue(t, X, broken)
            except at.GlueError:
                pass
            else:
                raise CheckFailed("inconsistent overlap data accepted")
    return f"{sc.samples} families"


@check("atlas_chi_formulas", "the two formulas for chi_ij agree", "atlas")
def _atlas_chi(sc, rng):
    n = sc.alg.matrix_size
    count = max(10, min(sc.samples, 10))
    for _ in range(count):
        g = rand_shear(rng, n, sc.d) * rand_shear(rng, n, sc.d, max_degree=0)
        X = tuple(rand_poly(rng, sc.d, 1) for _ in range(sc.d))
        expect_equal("g d(g^-1)(X) vs g (X . g^-1)", at.chi_de_rham(sc.alg, g, X), at.chi_direct(sc.alg, g, X))
    return f"{count} shear families"


def list_checks() -> list[Check]:
    return list(REGISTRY.values())
