"""Exact differential calculi on trivial transitive Lie algebroids and matrix algebras."""

from .atiyah import AtiyahModel, UnipotentGroup, connection_hat, lambda_restrict, reconstruct
from .connections import (
    ConnectionForm,
    GaugePotential,
    GeneralizedConnectionForm,
    RepConnectionForm,
    bianchi_defect,
    connection_from_potential,
    curvature,
    finite_gauge,
    induce_rep_connection,
    infinitesimal_gauge,
    rep_curvature,
)
from .forms import (
    FormSpace,
    MixedForm,
    TlaElement,
    differential,
    differential_via_koszul,
    endo_values,
    evaluate,
    graded_bracket,
    interior,
    kernel_values,
    lie_derivative,
    scalar_values,
    tla_bracket,
    wedge,
)
from .lie import LieAlgebra, make_abelian, make_heisenberg, make_sl, validate_jacobi
from .poly import DegreeCapError, Poly, degree_cap

__all__ = [
    "AtiyahModel",
    "ConnectionForm",
    "DegreeCapError",
    "FormSpace",
    "GaugePotential",
    "GeneralizedConnectionForm",
    "LieAlgebra",
    "MixedForm",
    "Poly",
    "RepConnectionForm",
    "TlaElement",
    "UnipotentGroup",
    "bianchi_defect",
    "connection_from_potential",
    "connection_hat",
    "curvature",
    "degree_cap",
    "differential",
    "differential_via_koszul",
    "endo_values",
    "evaluate",
    "finite_gauge",
    "graded_bracket",
    "induce_rep_connection",
    "infinitesimal_gauge",
    "interior",
    "kernel_values",
    "lambda_restrict",
    "lie_derivative",
    "make_abelian",
    "make_heisenberg",
    "make_sl",
    "reconstruct",
    "rep_curvature",
    "scalar_values",
    "tla_bracket",
    "validate_jacobi",
    "wedge",
]
