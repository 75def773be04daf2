"""Connections on ``TLA(M, g)`` and on representations of it.

Ordinary connections are kernel-valued 1-forms with ``alpha(0 + l) = -l``;
generalized ones drop that normalization.  Representation connections are
endomorphism-valued 1-forms ``omega^E``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from . import matrices as mx
from .forms import (
    FormSpace,
    MixedForm,
    TlaElement,
    differential,
    differential_via_koszul,
    endo_values,
    evaluate,
    graded_bracket,
    kernel_operation,
    wedge,
)
from .lie import GroupElementField, Representation, check_representation
from .poly import Poly


class ConnectionShapeError(ValueError):
    """Raised when a form does not have the shape a connection needs."""


def _require_kernel_one_form(w: MixedForm, what: str) -> None:
    if w.space.kind != "kernel" or w.degree != 1:
        raise ConnectionShapeError(f"{what} must be a kernel-valued 1-form")


def normalization_defect(alpha: MixedForm) -> MixedForm:
    """``alpha restricted to theta legs, plus theta``: zero iff ``alpha(0 + l) = -l`` for all ``l``."""
    return alpha.part(0, 1) + alpha.space.tautological()


@dataclass(frozen=True, eq=False)
class ConnectionForm:
    alpha: MixedForm

    def __post_init__(self) -> None:
        _require_kernel_one_form(self.alpha, "a connection 1-form")
        if not normalization_defect(self.alpha).is_zero():
            raise ConnectionShapeError("connection 1-form is not normalized: alpha(0 + l) must be -l")

    @property
    def form(self) -> MixedForm:
        return self.alpha

    @property
    def space(self) -> FormSpace:
        return self.alpha.space


@dataclass(frozen=True, eq=False)
class GeneralizedConnectionForm:
    omega: MixedForm

    def __post_init__(self) -> None:
        _require_kernel_one_form(self.omega, "a generalized connection 1-form")

    @property
    def form(self) -> MixedForm:
        return self.omega

    @property
    def space(self) -> FormSpace:
        return self.omega.space


@dataclass(frozen=True, eq=False)
class RepConnectionForm:
    omegaE: MixedForm

    def __post_init__(self) -> None:
        if self.omegaE.space.kind != "endo" or self.omegaE.degree != 1:
            raise ConnectionShapeError("a representation connection must be an endo-valued 1-form")

    @property
    def form(self) -> MixedForm:
        return self.omegaE

    @property
    def space(self) -> FormSpace:
        return self.omegaE.space


@dataclass(frozen=True)
class GaugePotential:
    """``A = sum_mu dx^mu (x) A_mu`` with each ``A_mu`` a polynomial map into ``g``."""

    A: tuple[tuple[Poly, ...], ...]

    def to_form(self, space: FormSpace) -> MixedForm:
        if len(self.A) != space.base_dim:
            raise ConnectionShapeError(f"potential has {len(self.A)} components, base has dimension {space.base_dim}")
        out = space.zero(1)
        for mu, a in enumerate(self.A):
            if len(a) != space.m:
                raise ConnectionShapeError("potential component does not match the Lie algebra dimension")
            out = out + space.dx(mu, a)
        return out


# -- ordinary and generalized connections ------------------------------------------

def connection_from_potential(A: GaugePotential, space: FormSpace) -> ConnectionForm:
    """``alpha = A - theta``."""
    return ConnectionForm(A.to_form(space) - space.tautological())


def _form_of(c) -> MixedForm:
    if isinstance(c, (ConnectionForm, GeneralizedConnectionForm, RepConnectionForm)):
        return c.form
    if isinstance(c, MixedForm):
        return c
    raise TypeError(f"not a connection: {type(c).__name__}")


def curvature(c: ConnectionForm | GeneralizedConnectionForm) -> MixedForm:
    """``d alpha + 1/2 [alpha, alpha]``."""
    a = _form_of(c)
    return differential(a) + graded_bracket(a, a).scale(Poly.const(1, a.space.nvars) / 2)


def curvature_oracle(c: ConnectionForm | GeneralizedConnectionForm, x: TlaElement, y: TlaElement) -> tuple:
    """Curvature on ``(x, y)`` from the Koszul formula and the pointwise bracket."""
    a = _form_of(c)
    dpart = differential_via_koszul(a, [x, y])
    br = a.space.values.bracket(evaluate(a, [x]), evaluate(a, [y]))
    return tuple(p + q for p, q in zip(dpart, br))


def bianchi_defect(c: ConnectionForm | GeneralizedConnectionForm) -> MixedForm:
    """``d R + [alpha, R]``."""
    a = _form_of(c)
    r = curvature(c)
    return differential(r) + graded_bracket(a, r)


def covariant_differential(c: ConnectionForm | GeneralizedConnectionForm, eta: MixedForm) -> MixedForm:
    """``D eta = d eta + [alpha, eta]``."""
    a = _form_of(c)
    if eta.space != a.space:
        raise ConnectionShapeError("eta must be kernel-valued over the same algebroid")
    return differential(eta) + graded_bracket(a, eta)


def covariant_square_defect(c: ConnectionForm | GeneralizedConnectionForm, eta: MixedForm) -> MixedForm:
    """``D D eta - [R, eta]``."""
    dd = covariant_differential(c, covariant_differential(c, eta))
    return dd - graded_bracket(curvature(c), eta)


def curvature_is_horizontal(c: ConnectionForm | GeneralizedConnectionForm) -> bool:
    a = _form_of(c)
    return kernel_operation(a.space).is_horizontal(curvature(c))


def infinitesimal_gauge(c, xi: MixedForm):
    """First-order gauge transform ``alpha + d xi + [alpha, xi]``; keeps the connection kind."""
    a = _form_of(c)
    if xi.degree != 0 or xi.space != a.space:
        raise ConnectionShapeError("gauge parameter must be a 0-form with the same values")
    if a.space.kind == "endo":
        shift = differential(xi) + wedge(a, xi) - wedge(xi, a)
    else:
        shift = differential(xi) + graded_bracket(a, xi)
    new = a + shift
    if isinstance(c, ConnectionForm):
        return ConnectionForm(new)
    if isinstance(c, GeneralizedConnectionForm):
        return GeneralizedConnectionForm(new)
    if isinstance(c, RepConnectionForm):
        return RepConnectionForm(new)
    return new


def embed_ordinary_as_A_connection(c: ConnectionForm) -> GeneralizedConnectionForm:
    return GeneralizedConnectionForm(c.alpha)


# -- representation connections -----------------------------------------------------

def induce_rep_connection(w: GeneralizedConnectionForm | ConnectionForm, phiL: Representation) -> RepConnectionForm:
    """Push the values of a kernel-valued 1-form through ``phiL``."""
    check_representation(phiL)
    a = _form_of(w)
    if phiL.alg != a.space.alg:
        raise ConnectionShapeError("representation is for a different Lie algebra")
    target = a.space.with_values(endo_values(phiL))
    nv = a.space.nvars
    return RepConnectionForm(a.map_values(lambda v: phiL(v, nv), target))


def push_values(w: MixedForm, phiL: Representation) -> MixedForm:
    """Apply ``phiL`` to the values of any kernel-valued form."""
    target = w.space.with_values(endo_values(phiL))
    nv = w.space.nvars
    return w.map_values(lambda v: phiL(v, nv), target)


def rep_curvature(w: RepConnectionForm | MixedForm) -> MixedForm:
    """``d_E omega + omega ^ omega``, i.e. ``R(X, Y) = d_E omega(X, Y) + [omega(X), omega(Y)]``."""
    o = _form_of(w)
    return differential(o) + wedge(o, o)


def rep_bianchi_defect(w: RepConnectionForm | MixedForm) -> MixedForm:
    o = _form_of(w)
    r = rep_curvature(o)
    return differential(r) + wedge(o, r) - wedge(r, o)


def finite_gauge(w: RepConnectionForm, g: GroupElementField) -> RepConnectionForm:
    """``g^-1 omega g + g^-1 d_E g``."""
    o = _form_of(w)
    sp = o.space
    if g.n != sp.values.n:
        raise ConnectionShapeError("gauge element size does not match the representation")
    gf = sp.function(g.matrix)
    ginv = sp.function(g.inverse_matrix)
    return RepConnectionForm(wedge(wedge(ginv, o), gf) + wedge(ginv, differential(gf)))


def conjugate(w: MixedForm, g: GroupElementField) -> MixedForm:
    """``g^-1 w g`` for an endo-valued form."""
    return w.map_values(lambda v: mx.mat_mul(mx.mat_mul(g.inverse_matrix, v), g.matrix))


def rep_connection_difference(a: RepConnectionForm, b: RepConnectionForm) -> MixedForm:
    """Connections form an affine space: the difference is an arbitrary endo-valued 1-form."""
    return a.omegaE - b.omegaE


def translate(c: RepConnectionForm, w: MixedForm) -> RepConnectionForm:
    return RepConnectionForm(c.omegaE + w)


def gauge_potential_from(A: Sequence[Sequence[Poly]]) -> GaugePotential:
    return GaugePotential(tuple(tuple(a) for a in A))
