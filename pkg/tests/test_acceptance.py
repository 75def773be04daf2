"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Runs at the defaults: d = 2, degree cap 6, 25 samples per property.
"""

import random
import subprocess
import sys
from contextlib import contextmanager
from itertools import product

import pytest

from algebroids import atlas as at
from algebroids import connections as cn
from algebroids import lie, ncg
from algebroids import matrices as mx
from algebroids.atiyah import AtiyahModel, UnipotentGroup, connection_hat, group_law_defects, lambda_restrict
from algebroids.checks import predicted_first_failure
from algebroids.forms import (
    FormSpace,
    cartan_defects,
    differential,
    endo_values,
    evaluate,
    graded_bracket,
    kernel_values,
    scalar_values,
)
from algebroids.poly import DEFAULT_DEGREE_CAP, Poly, degree_cap
from algebroids.sampling import (
    rand_element,
    rand_form,
    rand_gamma,
    rand_matrix,
    rand_mixed,
    rand_poly,
    rand_potential_form,
    rand_shear,
)
from algebroids.scenario import corpus_paths

D = 2
SAMPLES = 25
SL2 = lie.make_sl(2)
HEIS = lie.make_heisenberg()
AB = lie.make_abelian(2)


@contextmanager
def criterion(number, pytestconfig, label):
    capture = pytestconfig.pluginmanager.getplugin("capturemanager")
    ok = False
    try:
        with degree_cap(DEFAULT_DEGREE_CAP):
            yield
        ok = True
    finally:
        with capture.global_and_fixture_disabled():
            print(f"\n{'PASS' if ok else 'FAIL'} criterion {number}: {label}")


def test_criterion_01_cochain_condition(pytestconfig):
    with criterion(1, pytestconfig, "d^2 = 0 on scalar, kernel and endo forms"):
        rng = random.Random("c1")
        spaces = [FormSpace(D, scalar_values(SL2))]
        spaces += [FormSpace(D, kernel_values(a)) for a in (SL2, HEIS, AB)]
        spaces.append(FormSpace(D, endo_values(lie.defining_rep(SL2))))
        for sp in spaces:
            for p, q in product(range(4), repeat=2):
                if p + q > 3 or p > sp.base_dim or q > sp.m:
                    continue
                for _ in range(SAMPLES):
                    assert differential(differential(rand_form(rng, sp, p, q))).is_zero()


def test_criterion_02_cartan_relations(pytestconfig):
    with criterion(2, pytestconfig, "four Cartan relations"):
        rng = random.Random("c2")
        for alg in (SL2, HEIS):
            sp = FormSpace(D, kernel_values(alg))
            for _ in range(SAMPLES):
                x, y = rand_element(rng, sp), rand_element(rng, sp)
                w = rand_mixed(rng, sp, rng.randint(0, 2))
                for name, defect in cartan_defects(sp, x, y, rand_poly(rng, D, 1), w).items():
                    assert defect.is_zero(), name


def test_criterion_03_connection_suite(pytestconfig):
    with criterion(3, pytestconfig, "normalization, curvature, horizontality, Bianchi, D^2"):
        rng = random.Random("c3")
        for alg in (SL2, lie.make_abelian(1)):
            sp = FormSpace(D, kernel_values(alg))
            c = cn.ConnectionForm(rand_potential_form(rng, sp) - sp.tautological())
            for a in range(sp.m):
                ell = alg.basis_vector(a, D)
                assert evaluate(c.alpha, [sp.element(None, ell)]) == tuple(-v for v in ell)
            R = cn.curvature(c)
            for _ in range(SAMPLES):
                x, y = rand_element(rng, sp), rand_element(rng, sp)
                assert evaluate(R, [x, y]) == cn.curvature_oracle(c, x, y)
            assert cn.curvature_is_horizontal(c)
            assert cn.bianchi_defect(c).is_zero()
            for _ in range(SAMPLES):
                eta = rand_mixed(rng, sp, rng.randint(0, 2))
                assert cn.covariant_square_defect(c, eta).is_zero()


def test_criterion_04_flat_canonical(pytestconfig):
    with criterion(4, pytestconfig, "alpha = -theta is flat"):
        for alg in (SL2, HEIS, AB):
            sp = FormSpace(D, kernel_values(alg))
            assert cn.curvature(cn.ConnectionForm(-sp.tautological())).is_zero()


def test_criterion_05_matrix_ncg(pytestconfig):
    with criterion(5, pytestconfig, "Maurer-Cartan, degree-0 inner relation, higher-degree witness"):
        for n in (2, 3):
            assert ncg.maurer_cartan_defect(n).is_zero()
            assert all(ncg.inner_defect(w).is_zero() for w in ncg.basis_forms(n, 0))
            _, defect = ncg.higher_degree_witness(n)
            assert not defect.is_zero()


def test_criterion_06_nc_connections(pytestconfig):
    with criterion(6, pytestconfig, "operator curvature and gauge conjugation"):
        rng = random.Random("c6")
        sp = ncg.endo_space(D, 2)
        for _ in range(SAMPLES):
            c = ncg.NCConnection(rand_mixed(rng, sp, 1, 1))
            x, y = rand_element(rng, sp), rand_element(rng, sp)
            a = rand_matrix(rng, 2, D)
            assert ncg.nc_curvature_operator(c, x, y, a) == mx.mat_mul(evaluate(ncg.nc_curvature(c), [x, y]), a)
        for _ in range(10):
            c = ncg.NCConnection(rand_mixed(rng, sp, 1, 1))
            g = rand_shear(rng, 2, D)
            assert ncg.nc_curvature(ncg.nc_gauge(c, g)) == cn.conjugate(ncg.nc_curvature(c), g)


def test_criterion_07_theorem_suites(pytestconfig):
    with criterion(7, pytestconfig, "connection-space identifications"):
        rng = random.Random("c7")
        sp = ncg.endo_space(D, 2)
        for _ in range(SAMPLES):
            w = rand_mixed(rng, sp, 1, 1)
            g = rand_shear(rng, 2, D)
            for s, t in product(ncg.CONNECTION_SPACES, repeat=2):
                there = ncg.convert_connection(s, t, w)
                assert ncg.convert_connection(t, s, there) == w
                assert ncg.convert_form(s, t, ncg.curvature_in(s, w)) == ncg.curvature_in(t, there)
                assert ncg.convert_connection(s, t, ncg.finite_gauge_in(s, w, g)) == ncg.finite_gauge_in(t, there, g)
        ksp = FormSpace(D, kernel_values(SL2))
        tags = ncg.GENERALIZED_SPACES
        for _ in range(SAMPLES):
            w = rand_mixed(rng, ksp, 1, 1)
            xi = ksp.function(rand_gamma(rng, SL2, D))
            for s, t in product(tags, repeat=2):
                ws = ncg.convert_connection(tags[0], s, w)
                xs = ncg.convert_form(tags[0], s, xi)
                there = ncg.convert_connection(s, t, ws)
                assert ncg.convert_connection(t, s, there) == ws
                assert ncg.convert_form(s, t, ncg.curvature_in(s, ws)) == ncg.curvature_in(t, there)
                lhs = ncg.convert_connection(s, t, ncg.infinitesimal_gauge_in(s, ws, xs))
                assert lhs == ncg.infinitesimal_gauge_in(t, there, ncg.convert_form(s, t, xs))


def test_criterion_08_atiyah_model(pytestconfig):
    with criterion(8, pytestconfig, "Heisenberg Atiyah model"):
        rng = random.Random("c8")
        model = AtiyahModel(D, UnipotentGroup(3))
        assert group_law_defects(model.G) == []
        sp = model.p_space
        gens = model.g_equ.generators
        for _ in range(SAMPLES):
            x, y = rng.choice(gens), rng.choice(gens)
            w = rand_mixed(rng, sp, rng.randint(0, 2), max_degree=1)
            for name, defect in cartan_defects(sp, x, y, rand_poly(rng, sp.nvars, 1), w).items():
                assert defect.is_zero(), name
        B = model.base_space
        half = Poly.const(1, D) / 2
        for _ in range(10):
            A = rand_potential_form(rng, B)
            w = connection_hat(model, A)
            assert model.g_equ.is_basic(w)
            assert lambda_restrict(model, w) == A - B.tautological()
            F = lambda_restrict(model, cn.curvature(cn.GeneralizedConnectionForm(w)))
            assert F.bidegrees() <= {(2, 0)}
            assert F == differential(A).part(2, 0) + graded_bracket(A, A).scale(half)


def test_criterion_09_atlas(pytestconfig):
    with criterion(9, pytestconfig, "cocycle, perturbation, gluing, chi formulas"):
        rng = random.Random("c9")
        charts = ["1", "2", "3"]
        x1, x2 = Poly.var(0, D), Poly.var(1, D)
        g12, g23 = lie.shear(0, 1, x1, 2), lie.shear(0, 1, x2, 2)
        t = at.transitions_from_bundle(SL2, charts, {("1", "2"): g12, ("2", "3"): g23, ("1", "3"): g12 * g23}, D)
        assert at.validate_cocycle(t).ok
        pair = ("1", "2")
        bad = at.validate_cocycle(at.perturb_chi(t, pair, 0, SL2.basis_vector(1, D)))
        assert not bad.ok
        assert bad.first.triple == predicted_first_failure(charts, pair) == ("1", "2", "1")
        for _ in range(SAMPLES):
            X = tuple(rand_poly(rng, D, 1) for _ in range(D))
            fam = at.glue(t, X, {rng.choice(charts): rand_gamma(rng, SL2, D)})
            for i, j in product(charts, repeat=2):
                tr = t.get(i, j)
                assert fam.gammas[i] == tuple(a + b for a, b in zip(tr.apply_alpha(fam.gammas[j]), tr.apply_chi(X)))
        for _ in range(10):
            g = rand_shear(rng, 2, D) * rand_shear(rng, 2, D, max_degree=0)
            X = tuple(rand_poly(rng, D, 1) for _ in range(D))
            assert at.chi_de_rham(SL2, g, X) == at.chi_direct(SL2, g, X)


def test_criterion_10_cli_determinism(pytestconfig):
    with criterion(10, pytestconfig, "corpus runs are byte-identical and exit 0"):
        cmd = [sys.executable, "-m", "algebroids.cli", "run", "--corpus"]
        first = subprocess.run(cmd, capture_output=True)
        second = subprocess.run(cmd, capture_output=True)
        assert first.returncode == 0, first.stdout.decode()[-2000:] + first.stderr.decode()
        assert second.returncode == 0
        assert first.stdout == second.stdout
        assert first.stdout.count(b"scenario:") == len(corpus_paths())


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
