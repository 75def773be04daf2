"""Derivation-based calculus of ``M_n`` and of ``A = Poly (x) M_n``.

Every derivation of ``M_n`` is inner, ``ad_gamma`` with ``gamma`` traceless, so
forms on ``M_n`` are ``M_n``-valued forms on ``sl_n``: a :class:`MixedForm`
over a zero-dimensional base with endo values (defining representation).  On
``A`` the derivations are ``X + ad_gamma`` and the same machinery applies over
a base of positive dimension.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import matrices as mx
from .connections import (
    GeneralizedConnectionForm,
    RepConnectionForm,
    curvature,
    finite_gauge,
    infinitesimal_gauge,
    rep_curvature,
)
from .forms import (
    FormSpace,
    MixedForm,
    TlaElement,
    differential,
    endo_values,
    evaluate,
    kernel_values,
    wedge,
)
from .lie import GroupElementField, LieAlgebra, defining_rep, make_sl, traceless_projection
from .poly import Poly

MatrixNCForm = MixedForm
EndoNCForm = MixedForm


def matrix_space(n: int) -> FormSpace:
    """Forms on ``M_n``."""
    return FormSpace(0, endo_values(defining_rep(make_sl(n))))


def endo_space(d: int, n: int) -> FormSpace:
    """Forms on ``Poly[x_1..x_d] (x) M_n``."""
    return FormSpace(d, endo_values(defining_rep(make_sl(n))))


def _check_nc_space(sp: FormSpace) -> None:
    alg = sp.alg
    if sp.kind != "endo" or alg.matrix_basis is None or sp.values.rep.matrices != alg.matrix_basis:
        raise ValueError("not a derivation-based calculus: values must be matrices under the defining representation")


def inner_derivation(n: int, m: Sequence, space: FormSpace | None = None) -> TlaElement:
    """``ad_m`` as an algebroid element; only the traceless part of ``m`` matters."""
    space = space or matrix_space(n)
    nv = space.nvars
    mm = tuple(x if isinstance(x, Poly) else Poly.const(x, nv) for x in m)
    coords = space.alg.coords(traceless_projection(mm))
    return space.element(None, coords)


@dataclass(frozen=True)
class NCDerivation:
    """``X + ad_gamma`` acting on ``A``."""

    X: tuple[Poly, ...]
    gamma: tuple[Poly, ...]

    def element(self) -> TlaElement:
        return TlaElement(tuple(self.X), tuple(self.gamma))

    def act(self, space: FormSpace, a: Sequence[Poly]) -> tuple[Poly, ...]:
        return space.act(self.element(), tuple(a))


def _as_element(x) -> TlaElement:
    return x.element() if isinstance(x, NCDerivation) else x


# -- canonical 1-form ------------------------------------------------------------------

def canonical_itheta(n: int, space: FormSpace | None = None) -> MixedForm:
    """``i theta(ad_gamma) = gamma - tr(gamma)/n``: the sum ``sum_a theta^a (x) E_a``."""
    if n < 2:
        raise ValueError("the canonical 1-form needs n >= 2")
    space = space or matrix_space(n)
    _check_nc_space(space)
    if space.values.n != n:
        raise ValueError("space is for a different matrix size")
    nv = space.nvars
    out = space.zero(1)
    for a, e in enumerate(space.alg.matrix_basis):
        out = out + space.theta(a, mx.const_matrix(e, nv))
    return out


def nc_differential(w: MixedForm) -> MixedForm:
    """Koszul differential over the inner derivations (and the vector fields, on ``A``)."""
    _check_nc_space(w.space)
    if w.degree >= w.space.nlegs:
        return w.space.zero(w.degree + 1)
    return differential(w)


def graded_commutator(a: MixedForm, b: MixedForm) -> MixedForm:
    sign = -1 if (a.degree * b.degree) % 2 else 1
    return wedge(a, b) - wedge(b, a).scale(sign)


def maurer_cartan_defect(n: int) -> MixedForm:
    """``d'(i theta) - (i theta)^2``."""
    it = canonical_itheta(n)
    return nc_differential(it) - wedge(it, it)


def inner_defect(w: MixedForm) -> MixedForm:
    """``d'w - [i theta, w]`` with the graded commutator."""
    n = w.space.values.n
    return nc_differential(w) - graded_commutator(canonical_itheta(n, w.space), w)


def basis_forms(n: int, degree: int) -> list[MixedForm]:
    """All ``E_ij (x) theta^J`` with ``|J| = degree`` on ``M_n``, in lexicographic order."""
    from itertools import combinations

    sp = matrix_space(n)
    out = []
    for legs in combinations(range(sp.nlegs), degree):
        for i in range(n):
            for j in range(n):
                out.append(sp.monomial(legs, mx.const_matrix(mx.elementary(i, j, n), 0)))
    return out


def scan_inner_defects(n: int, degree: int) -> list[tuple[MixedForm, MixedForm]]:
    return [(w, dft) for w in basis_forms(n, degree) if not (dft := inner_defect(w)).is_zero()]


def higher_degree_witness(n: int) -> tuple[MixedForm, MixedForm]:
    """First basis 1-form whose ``d'w`` differs from ``[i theta, w]``, and that difference."""
    if n < 2:
        raise ValueError("need n >= 2")
    for w in basis_forms(n, 1):
        dft = inner_defect(w)
        if not dft.is_zero():
            return w, dft
    raise RuntimeError(f"no degree-1 form of M_{n} violates d'w = [i theta, w]")


# -- derivations of M_n -------------------------------------------------------------------

def derivation_space_dimension(n: int) -> int:
    """Dimension of ``der(M_n)``, solving the Leibniz rule on matrix units as a linear system."""
    n2 = n * n
    units = [mx.elementary(i, j, n) for i in range(n) for j in range(n)]
    # unknown D[p][q]: coefficient of unit q in D(unit p); variable index p*n2 + q
    rows = []
    for p, a in enumerate(units):
        for q, b in enumerate(units):
            ab = mx.mat_mul(a, b)
            for r in range(n2):
                row = [Fraction(0)] * (n2 * n2)
                # D(ab)_r
                for s, c in enumerate(ab):
                    if c:
                        row[s * n2 + r] += c
                # - (D(a) b)_r - (a D(b))_r
                for t in range(n2):
                    tb = mx.mat_mul(units[t], b)[r]
                    if tb:
                        row[p * n2 + t] -= tb
                    at = mx.mat_mul(a, units[t])[r]
                    if at:
                        row[q * n2 + t] -= at
                if any(row):
                    rows.append(row)
    return n2 * n2 - mx.rank(rows)


def inner_derivation_rank(n: int) -> int:
    """Rank of ``sl_n -> End(M_n), gamma -> ad_gamma``."""
    alg = make_sl(n)
    units = [mx.elementary(i, j, n) for i in range(n) for j in range(n)]
    rows = []
    for e in alg.matrix_basis:
        row = []
        for u in units:
            row.extend(mx.commutator(e, u))
        rows.append(row)
    return mx.rank(rows)


# -- connections on the free module A ---------------------------------------------------------

@dataclass(frozen=True, eq=False)
class NCConnection:
    omega: MixedForm

    def __post_init__(self) -> None:
        _check_nc_space(self.omega.space)
        if self.omega.degree != 1:
            raise ValueError("a noncommutative connection is given by a 1-form")

    @property
    def space(self) -> FormSpace:
        return self.omega.space


def nc_connection_apply(c: NCConnection, x, a: Sequence[Poly]) -> tuple[Poly, ...]:
    """``nabla_x a = x.a + omega(x) a``."""
    x = _as_element(x)
    sp = c.space
    xa = sp.act(x, tuple(a))
    return mx.mat_add(xa, mx.mat_mul(evaluate(c.omega, [x]), tuple(a)))


def nc_curvature(c: NCConnection) -> MixedForm:
    """``Omega(X, Y) = d omega(X, Y) + [omega(X), omega(Y)]``."""
    return nc_differential(c.omega) + wedge(c.omega, c.omega)


def nc_curvature_operator(c: NCConnection, x, y, a: Sequence[Poly]) -> tuple[Poly, ...]:
    """``[nabla_x, nabla_y] a - nabla_[x,y] a``."""
    x, y = _as_element(x), _as_element(y)
    xy = c.space.bracket(x, y)
    ap = lambda u, v: nc_connection_apply(c, u, v)  # noqa: E731
    return mx.mat_sub(mx.mat_sub(ap(x, ap(y, a)), ap(y, ap(x, a))), ap(xy, a))


def form_from_values(space: FormSpace, value_on_leg) -> MixedForm:
    """1-form whose value on the ``leg``-th basis element is ``value_on_leg(leg)``."""
    out = space.zero(1)
    for leg in range(space.nlegs):
        out = out + space.monomial((leg,), value_on_leg(leg))
    return out


def nc_gauge(c: NCConnection, g: GroupElementField) -> NCConnection:
    """Transform by ``g`` as a module automorphism: ``omega^g(x) = g^-1 nabla_x g``."""
    sp = c.space
    if g.n != sp.values.n:
        raise ValueError("gauge element has the wrong size")

    def value(leg: int):
        x = sp.basis_element(leg)
        return mx.mat_mul(g.inverse_matrix, nc_connection_apply(c, x, g.matrix))

    return NCConnection(form_from_values(sp, value))


def nc_infinitesimal_gauge(c: NCConnection, xi: Sequence[Poly]) -> NCConnection:
    """First-order part of ``nc_gauge`` along ``1 + t xi``: ``omega(x) + [omega(x), xi] + x.xi``."""
    sp = c.space
    xi = tuple(xi)

    def value(leg: int):
        x = sp.basis_element(leg)
        w = evaluate(c.omega, [x])
        return mx.mat_add(mx.commutator(w, xi), sp.act(x, xi))

    return NCConnection(c.omega + form_from_values(sp, value))


def is_traceless(w: MixedForm) -> bool:
    if w.space.kind != "endo":
        raise ValueError("trace needs matrix values")
    return all(not mx.trace(v) for v in w.comps.values())


# -- the connection-space identifications ----------------------------------------------------

CONNECTION_SPACES = ("derA_connection", "atiyah_connection", "nc_connection")
GENERALIZED_SPACES = ("generalized_derA", "generalized_atiyah", "traceless_nc")
CONNECTION_TAGS = CONNECTION_SPACES + GENERALIZED_SPACES


class TagMismatch(ValueError):
    pass


def _check_payload(tag: str, w: MixedForm) -> None:
    if tag not in CONNECTION_TAGS:
        raise TagMismatch(f"unknown connection space {tag!r}")
    if w.degree != 1:
        raise TagMismatch(f"{tag} payload must be a 1-form")
    if tag in ("generalized_derA", "generalized_atiyah"):
        if w.space.kind != "kernel" or w.space.alg.matrix_basis is None:
            raise TagMismatch(f"{tag} payload must be kernel-valued over a matrix Lie algebra")
        return
    try:
        _check_nc_space(w.space)
    except ValueError as exc:
        raise TagMismatch(f"{tag} payload: {exc}") from None
    if tag == "traceless_nc" and not is_traceless(w):
        raise TagMismatch("traceless_nc payload has a component with nonzero trace")


def kernel_to_traceless(w: MixedForm) -> MixedForm:
    alg = w.space.alg
    target = w.space.with_values(endo_values(defining_rep(alg)))
    nv = w.space.nvars
    return w.map_values(lambda v: alg.to_matrix(v, nv), target)


def traceless_to_kernel(w: MixedForm) -> MixedForm:
    alg = w.space.alg
    return w.map_values(alg.coords, w.space.with_values(kernel_values(alg)))


def convert_connection(space_from: str, space_to: str, payload: MixedForm) -> MixedForm:
    """Move a connection 1-form between isomorphic connection spaces."""
    _check_payload(space_from, payload)
    if space_to not in CONNECTION_TAGS:
        raise TagMismatch(f"unknown connection space {space_to!r}")
    same_one = space_from in CONNECTION_SPACES and space_to in CONNECTION_SPACES
    same_two = space_from in GENERALIZED_SPACES and space_to in GENERALIZED_SPACES
    if not (same_one or same_two):
        raise TagMismatch(f"{space_from} and {space_to} are not identified with each other")
    src_nc = space_from == "traceless_nc"
    dst_nc = space_to == "traceless_nc"
    if src_nc and not dst_nc:
        return traceless_to_kernel(payload)
    if dst_nc and not src_nc:
        return kernel_to_traceless(payload)
    return payload


def curvature_in(tag: str, w: MixedForm) -> MixedForm:
    """Curvature computed natively in the space named by ``tag``."""
    _check_payload(tag, w)
    if tag in ("traceless_nc", "nc_connection"):
        return nc_curvature(NCConnection(w))
    if tag in ("generalized_derA", "generalized_atiyah"):
        return curvature(GeneralizedConnectionForm(w))
    return rep_curvature(RepConnectionForm(w))


def convert_form(space_from: str, space_to: str, w: MixedForm) -> MixedForm:
    """Carry a form of any degree along the same identification as :func:`convert_connection`."""
    if space_from in GENERALIZED_SPACES and space_to == "traceless_nc" and space_from != space_to:
        return kernel_to_traceless(w)
    if space_from == "traceless_nc" and space_to in GENERALIZED_SPACES and space_from != space_to:
        return traceless_to_kernel(w)
    return w


def finite_gauge_in(tag: str, w: MixedForm, g: GroupElementField) -> MixedForm:
    _check_payload(tag, w)
    if tag == "nc_connection":
        return nc_gauge(NCConnection(w), g).omega
    if tag in CONNECTION_SPACES:
        return finite_gauge(RepConnectionForm(w), g).omegaE
    raise TagMismatch(f"{tag} carries only infinitesimal gauge transformations")


def infinitesimal_gauge_in(tag: str, w: MixedForm, xi: MixedForm) -> MixedForm:
    """``xi`` is a 0-form in the payload's own value space."""
    _check_payload(tag, w)
    if tag in ("traceless_nc", "nc_connection"):
        return nc_infinitesimal_gauge(NCConnection(w), xi.comps.get((), w.space.zero_value())).omega
    if tag in GENERALIZED_SPACES:
        return infinitesimal_gauge(GeneralizedConnectionForm(w), xi).omega
    return infinitesimal_gauge(RepConnectionForm(w), xi).omegaE


def embed_kernel_form(w: MixedForm) -> MixedForm:
    """Kernel-valued form as a traceless NC form."""
    return kernel_to_traceless(w)


def sl_algebra(space: FormSpace) -> LieAlgebra:
    return space.alg
