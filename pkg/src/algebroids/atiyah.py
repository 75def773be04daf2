"""Trivial principal bundle ``P = M x G`` with ``G`` unipotent.

``G`` is the group of upper unitriangular ``n x n`` matrices with global
coordinates ``y_p`` (one per strictly upper position, ordered by superdiagonal
then row), so group law, inverse, adjoint action and Maurer-Cartan form are
all polynomial.  Forms on ``P`` live in a :class:`FormSpace` whose base has
the ``d + dim G`` coordinates ``(x, y)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from . import matrices as mx
from .forms import (
    CartanOperation,
    FormSpace,
    MixedForm,
    TlaElement,
    kernel_values,
    substitute_legs,
)
from .lie import LieAlgebra, make_upper_nilpotent, upper_positions
from .poly import Poly, zeros


class NotBasicError(ValueError):
    pass


@dataclass(frozen=True)
class UnipotentGroup:
    n: int

    def __post_init__(self) -> None:
        if self.n < 2:
            raise ValueError("unipotent group needs n >= 2")

    @cached_property
    def alg(self) -> LieAlgebra:
        return make_upper_nilpotent(self.n)

    @cached_property
    def positions(self) -> list[tuple[int, int]]:
        return upper_positions(self.n)

    @property
    def dim(self) -> int:
        return len(self.positions)

    def element(self, y: list[Poly]) -> tuple[Poly, ...]:
        """``g(y) = 1 + sum_p y_p E_p``."""
        nv = y[0].nvars
        g = list(mx.identity(self.n, nv))
        for (i, j), yp in zip(self.positions, y):
            g[i * self.n + j] = yp
        return tuple(g)

    def inverse(self, g: tuple[Poly, ...]) -> tuple[Poly, ...]:
        """``(1 + N)^-1 = sum_k (-N)^k`` (finite: ``N`` is nilpotent)."""
        nv = g[0].nvars
        eye = mx.identity(self.n, nv)
        neg = mx.mat_neg(mx.mat_sub(g, eye))
        out, power = eye, eye
        for _ in range(self.n - 1):
            power = mx.mat_mul(power, neg)
            out = mx.mat_add(out, power)
        return out

    def coords_of(self, g: tuple[Poly, ...]) -> list[Poly]:
        return [g[i * self.n + j] for i, j in self.positions]

    def law(self, y: list[Poly], z: list[Poly]) -> list[Poly]:
        """Coordinates of ``g(y) g(z)``."""
        return self.coords_of(mx.mat_mul(self.element(y), self.element(z)))

    def ad(self, g: tuple[Poly, ...], ginv: tuple[Poly, ...]) -> tuple[Poly, ...]:
        """Matrix of ``Ad_g`` on ``g`` (column ``b`` holds the coordinates of ``g E_b g^-1``)."""
        m = self.alg.dim
        cols = []
        for e in self.alg.matrix_basis:
            emat = mx.const_matrix(e, g[0].nvars)
            cols.append(self.alg.coords(mx.mat_mul(mx.mat_mul(g, emat), ginv)))
        return tuple(cols[b][a] for a in range(m) for b in range(m))


def group_law_defects(G: UnipotentGroup) -> list[str]:
    """Associativity, inverses and ``Ad`` as a homomorphism, as polynomial identities."""
    k = G.dim
    nv = 3 * k
    y = [Poly.var(i, nv) for i in range(k)]
    z = [Poly.var(k + i, nv) for i in range(k)]
    w = [Poly.var(2 * k + i, nv) for i in range(k)]
    bad = []
    if G.law(G.law(y, z), w) != G.law(y, G.law(z, w)):
        bad.append("group law is not associative")
    gy = G.element(y)
    gyinv = G.inverse(gy)
    eye = mx.identity(G.n, nv)
    if mx.mat_mul(gy, gyinv) != eye or mx.mat_mul(gyinv, gy) != eye:
        bad.append("inverse is not two-sided")
    if G.law(y, G.coords_of(gyinv)) != list(zeros(k, nv)):
        bad.append("y * y^-1 is not the identity")
    ad_y = G.ad(gy, gyinv)
    ad_yinv = G.ad(gyinv, gy)
    if mx.mat_mul(ad_yinv, ad_y) != mx.identity(G.alg.dim, nv):
        bad.append("Ad_{g^-1} Ad_g is not the identity")
    gz = G.element(z)
    gyz = mx.mat_mul(gy, gz)
    if G.ad(gyz, G.inverse(gyz)) != mx.mat_mul(ad_y, G.ad(gz, G.inverse(gz))):
        bad.append("Ad is not a homomorphism")
    return bad


@dataclass(frozen=True)
class AtiyahModel:
    """``TLA(P, g)`` for ``P = M x G`` with ``dim M = d``."""

    d: int
    G: UnipotentGroup

    @property
    def alg(self) -> LieAlgebra:
        return self.G.alg

    @cached_property
    def base_space(self) -> FormSpace:
        return FormSpace(self.d, kernel_values(self.alg))

    @cached_property
    def p_space(self) -> FormSpace:
        return FormSpace(self.d + self.G.dim, kernel_values(self.alg))

    @property
    def nvars(self) -> int:
        return self.d + self.G.dim

    @cached_property
    def y(self) -> list[Poly]:
        return [Poly.var(self.d + p, self.nvars) for p in range(self.G.dim)]

    @cached_property
    def g(self) -> tuple[Poly, ...]:
        return self.G.element(self.y)

    @cached_property
    def ginv(self) -> tuple[Poly, ...]:
        return self.G.inverse(self.g)

    @cached_property
    def ad_g(self) -> tuple[Poly, ...]:
        return self.G.ad(self.g, self.ginv)

    @cached_property
    def ad_ginv(self) -> tuple[Poly, ...]:
        return self.G.ad(self.ginv, self.g)

    def dy_leg(self, p: int) -> int:
        return self.d + p

    def theta_leg(self, a: int) -> int:
        return self.nvars + a

    # -- equivariance data --

    def fundamental_field(self, a: int) -> tuple[Poly, ...]:
        """``xi^P = d/dt (p exp(t xi))``: the ``y``-components are the entries of ``g xi``."""
        e = mx.const_matrix(self.alg.matrix_basis[a], self.nvars)
        gx = self.G.coords_of(mx.mat_mul(self.g, e))
        return zeros(self.d, self.nvars) + tuple(gx)

    def equ_generator(self, a: int) -> TlaElement:
        """``xi^P + xi`` for the basis element ``e_a``."""
        return TlaElement(self.fundamental_field(a), self.alg.basis_vector(a, self.nvars))

    @cached_property
    def g_equ(self) -> CartanOperation:
        return CartanOperation(self.p_space, tuple(self.equ_generator(a) for a in range(self.alg.dim)))

    def fundamental_bracket_defects(self) -> list[tuple[int, int]]:
        """Pairs where ``[xi^P, eta^P] != [xi, eta]^P``."""
        from .poly import field_bracket

        bad = []
        m = self.alg.dim
        for a in range(m):
            for b in range(a + 1, m):
                lhs = field_bracket(self.fundamental_field(a), self.fundamental_field(b))
                rhs = list(zeros(self.nvars, self.nvars))
                for k, c in enumerate(self.alg.structure_constants[a][b]):
                    if c:
                        rhs = [r + f * c for r, f in zip(rhs, self.fundamental_field(k))]
                if tuple(lhs) != tuple(rhs):
                    bad.append((a, b))
        return bad

    # -- forms on P --

    def lift_coefficient(self, f: Poly) -> Poly:
        """Pull a function on ``M`` back to ``P``."""
        return f.embed(self.nvars, 0)

    def lift_value(self, v) -> tuple[Poly, ...]:
        return tuple(self.lift_coefficient(x) for x in v)

    def apply_ad(self, adm: tuple[Poly, ...], v) -> tuple[Poly, ...]:
        m = self.alg.dim
        out = []
        for a in range(m):
            acc = Poly.zero(self.nvars)
            for b in range(m):
                if adm[a * m + b] and v[b]:
                    acc = acc + adm[a * m + b] * v[b]
            out.append(acc)
        return tuple(out)


@dataclass(frozen=True, eq=False)
class MaurerCartanOnP:
    dy_part: MixedForm
    tautological: MixedForm

    @property
    def form(self) -> MixedForm:
        return self.dy_part + self.tautological


def maurer_cartan_on_P(model: AtiyahModel) -> MaurerCartanOnP:
    """``g^-1 dg`` (in the ``dy`` legs) and the tautological ``sum theta^a (x) e_a``."""
    sp = model.p_space
    dy = sp.zero(1)
    for p, (i, j) in enumerate(model.G.positions):
        e = mx.const_matrix(mx.elementary(i, j, model.G.n), model.nvars)
        dy = dy + sp.monomial((model.dy_leg(p),), model.alg.coords(mx.mat_mul(model.ginv, e)))
    return MaurerCartanOnP(dy, sp.tautological())


def potential_on_P(model: AtiyahModel, A: MixedForm) -> MixedForm:
    """``Ad_{g^-1}`` of the pulled-back potential."""
    if A.space != model.base_space or A.bidegrees() - {(1, 0)}:
        raise ValueError("potential must be a (1, 0) kernel-valued form on the base")
    sp = model.p_space
    out = sp.zero(1)
    for (mu,), v in A.comps.items():
        out = out + sp.monomial((mu,), model.apply_ad(model.ad_ginv, model.lift_value(v)))
    return out


def connection_hat(model: AtiyahModel, A: MixedForm) -> MixedForm:
    """``omega - theta`` with ``omega = Ad_{g^-1} A + g^-1 dg`` and ``theta`` tautological."""
    mc = maurer_cartan_on_P(model)
    return potential_on_P(model, A) + mc.dy_part - mc.tautological


def _restriction_images(model: AtiyahModel) -> list[dict[int, Poly]]:
    """Leg images for the restriction to the identity section."""
    nb = model.base_space.nvars
    one = Poly.const(1, nb)
    images: list[dict[int, Poly]] = []
    for mu in range(model.d):
        images.append({mu: one})
    for p in range(model.G.dim):
        images.append({model.d + p: -one})
    for _ in range(model.alg.dim):
        images.append({})
    return images


def lambda_restrict(model: AtiyahModel, w: MixedForm, check: bool = True) -> MixedForm:
    """Restriction of a basic form to ``y = 0``, evaluating on ``X + 0`` and ``-gamma^P``.

    Under this map ``dx -> dx``, ``dy^p -> -theta^p`` and the ``theta`` legs of
    ``P`` drop out.
    """
    if w.space != model.p_space:
        raise ValueError("form does not live on P")
    if check and not model.g_equ.is_basic(w):
        raise NotBasicError("lambda_restrict needs a g_equ-basic form")
    nb = model.base_space.nvars
    at_identity = [Poly.var(i, nb) for i in range(model.d)] + list(zeros(model.G.dim, nb))
    return substitute_legs(w, model.base_space, _restriction_images(model), lambda f: f.subs(at_identity, nb))


def reconstruct(model: AtiyahModel, w: MixedForm) -> MixedForm:
    """The basic form on ``P`` restricting to ``w``.

    ``theta^a`` on ``M`` becomes ``sum_b (Ad_g)_ab theta^b - (dg g^-1)^a`` and
    values are transported by ``Ad_{g^-1}``.
    """
    if w.space != model.base_space:
        raise ValueError("form does not live on the base")
    nv = model.nvars
    m = model.alg.dim
    images: list[dict[int, Poly]] = [{mu: Poly.const(1, nv)} for mu in range(model.d)]
    right = []
    for i, j in model.G.positions:
        e = mx.const_matrix(mx.elementary(i, j, model.G.n), nv)
        right.append(model.alg.coords(mx.mat_mul(e, model.ginv)))
    for a in range(m):
        img: dict[int, Poly] = {}
        for b in range(m):
            c = model.ad_g[a * m + b]
            if c:
                img[model.theta_leg(b)] = c
        for p in range(model.G.dim):
            c = right[p][a]
            if c:
                img[model.dy_leg(p)] = -c
        images.append(img)
    return substitute_legs(
        w,
        model.p_space,
        images,
        model.lift_coefficient,
        lambda v: model.apply_ad(model.ad_ginv, v),
    )


def generalized_split(model: AtiyahModel, w: MixedForm) -> tuple[MixedForm, MixedForm]:
    """``w = omega + phi`` with ``omega`` in the ``(dx, dy)`` legs and ``phi`` in the ``theta`` legs."""
    if w.degree != 1:
        raise ValueError("generalized_split takes a 1-form")
    return w.part(1, 0), w.part(0, 1)
