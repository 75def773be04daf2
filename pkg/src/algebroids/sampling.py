"""Seeded random polynomials, forms and algebroid elements with small integer coefficients."""

from __future__ import annotations

import random
from itertools import combinations
from typing import Sequence

from .forms import FormSpace, MixedForm, TlaElement
from .lie import GroupElementField, LieAlgebra, shear
from .poly import Poly

COEFF_RANGE = 3


def rand_coeff(rng: random.Random, nonzero: bool = False) -> int:
    while True:
        c = rng.randint(-COEFF_RANGE, COEFF_RANGE)
        if c or not nonzero:
            return c


def rand_poly(rng: random.Random, nvars: int, max_degree: int = 2, terms: int = 3) -> Poly:
    out = {}
    for _ in range(terms):
        deg = rng.randint(0, max_degree) if nvars else 0
        exp = [0] * nvars
        for _ in range(deg):
            exp[rng.randrange(nvars)] += 1
        out[tuple(exp)] = out.get(tuple(exp), 0) + rand_coeff(rng)
    return Poly(out, nvars)


def rand_value(rng: random.Random, space: FormSpace, max_degree: int = 2, density: float = 0.5) -> tuple[Poly, ...]:
    nv = space.nvars
    size = space.values.size
    v = [Poly.zero(nv)] * size
    hits = [i for i in range(size) if rng.random() < density] or [rng.randrange(size)]
    for i in hits:
        v[i] = rand_poly(rng, nv, max_degree, terms=2)
    return tuple(v)


def rand_form(
    rng: random.Random,
    space: FormSpace,
    p: int,
    q: int,
    max_degree: int = 2,
    components: int = 2,
) -> MixedForm:
    """Sparse random form of bidegree ``(p, q)``."""
    d, m = space.base_dim, space.m
    if p > d or q > m:
        return space.zero(p + q)
    dx_sets = list(combinations(range(d), p))
    th_sets = list(combinations(range(m), q))
    out = space.zero(p + q)
    for _ in range(components):
        I = rng.choice(dx_sets)
        J = rng.choice(th_sets)
        legs = list(I) + [d + j for j in J]
        out = out + space.monomial(legs, rand_value(rng, space, max_degree))
    return out


def rand_mixed(rng: random.Random, space: FormSpace, degree: int, max_degree: int = 2) -> MixedForm:
    """Random form of total degree ``degree`` spread over the available bidegrees."""
    out = space.zero(degree)
    for p in range(0, degree + 1):
        if p <= space.base_dim and degree - p <= space.m and rng.random() < 0.7:
            out = out + rand_form(rng, space, p, degree - p, max_degree, components=1)
    return out


def rand_element(rng: random.Random, space: FormSpace, max_degree: int = 1) -> TlaElement:
    nv = space.nvars
    X = tuple(rand_poly(rng, nv, max_degree, terms=2) for _ in range(space.base_dim))
    gamma = tuple(rand_poly(rng, nv, max_degree, terms=1) if rng.random() < 0.6 else Poly.zero(nv) for _ in range(space.m))
    return TlaElement(X, gamma)


def rand_gamma(rng: random.Random, alg: LieAlgebra, nvars: int, max_degree: int = 1) -> tuple[Poly, ...]:
    return tuple(rand_poly(rng, nvars, max_degree, terms=2) for _ in range(alg.dim))


def rand_potential_form(rng: random.Random, space: FormSpace, max_degree: int = 1) -> MixedForm:
    """Random kernel-valued ``(1, 0)`` form."""
    out = space.zero(1)
    for mu in range(space.base_dim):
        out = out + space.dx(mu, rand_value(rng, space, max_degree, density=0.4))
    return out


def rand_shear(rng: random.Random, n: int, nvars: int, max_degree: int = 1, upper_only: bool = False) -> GroupElementField:
    while True:
        i, j = rng.randrange(n), rng.randrange(n)
        if i != j and (not upper_only or i < j):
            break
    p = rand_poly(rng, nvars, max_degree, terms=2)
    return shear(i, j, p, n)


def rand_matrix(rng: random.Random, n: int, nvars: int, max_degree: int = 1) -> tuple[Poly, ...]:
    return tuple(rand_poly(rng, nvars, max_degree, terms=1) if rng.random() < 0.5 else Poly.zero(nvars) for _ in range(n * n))


def rng_for(seed: int, name: str) -> random.Random:
    return random.Random(f"{seed}:{name}")


def pick(rng: random.Random, items: Sequence):
    return items[rng.randrange(len(items))]
