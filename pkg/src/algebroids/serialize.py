"""Plain-data records for algebras, forms, connections and group elements.

Rationals are ``"p/q"`` strings, polynomials use :func:`format_poly`, and all
external indices are 1-based.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Any, Mapping, Sequence

from . import matrices as mx
from .forms import FormSpace, MixedForm
from .lie import LieAlgebra, check_lie_algebra
from .poly import Poly, format_fraction, format_poly, parse_poly, to_fraction


class RecordError(ValueError):
    """Malformed record; ``path`` locates the offending entry."""

    def __init__(self, path: str, message: str):
        self.path = path
        super().__init__(f"{path}: {message}")


# -- Lie algebras ---------------------------------------------------------------------

def lie_algebra_to_record(alg: LieAlgebra) -> dict:
    triples = [[i + 1, j + 1, k + 1, format_fraction(c)] for i, j, k, c in alg.nonzero_brackets if i < j]
    rec: dict[str, Any] = {"dim": alg.dim, "structure_constants": triples}
    if alg.matrix_basis is not None:
        n = alg.matrix_size
        rec["matrix_basis"] = [
            [[format_fraction(e[r * n + c]) for c in range(n)] for r in range(n)] for e in alg.matrix_basis
        ]
    if alg.name:
        rec["name"] = alg.name
    return rec


def lie_algebra_from_record(rec: Mapping, path: str = "lie_algebra", validate: bool = True) -> LieAlgebra:
    try:
        dim = int(rec["dim"])
    except (KeyError, TypeError, ValueError):
        raise RecordError(path, "needs an integer 'dim'") from None
    triples = []
    for idx, t in enumerate(rec.get("structure_constants", []) or []):
        if not isinstance(t, (list, tuple)) or len(t) != 4:
            raise RecordError(f"{path}.structure_constants[{idx}]", "expected [i, j, k, value]")
        i, j, k = (int(x) - 1 for x in t[:3])
        if not all(0 <= x < dim for x in (i, j, k)):
            raise RecordError(f"{path}.structure_constants[{idx}]", "index out of range")
        triples.append((i, j, k, _fraction(t[3], f"{path}.structure_constants[{idx}]")))
    basis = None
    if rec.get("matrix_basis") is not None:
        basis = []
        for idx, mat in enumerate(rec["matrix_basis"]):
            basis.append(tuple(_fraction(x, f"{path}.matrix_basis[{idx}]") for row in mat for x in row))
        if len(basis) != dim:
            raise RecordError(f"{path}.matrix_basis", f"expected {dim} matrices")
    try:
        alg = LieAlgebra.from_triples(dim, triples, basis, rec.get("name", ""))
    except ValueError as exc:
        raise RecordError(path, str(exc)) from None
    if validate:
        try:
            check_lie_algebra(alg)
        except ValueError as exc:
            raise RecordError(path, str(exc)) from None
    return alg


def _fraction(x, path: str) -> Fraction:
    try:
        return to_fraction(x)
    except (ValueError, ZeroDivisionError, TypeError):
        raise RecordError(path, f"not an exact rational: {x!r}") from None


# -- values and forms ---------------------------------------------------------------------

def poly_to_str(p: Poly) -> str:
    return format_poly(p)


def poly_from(x, nvars: int, path: str) -> Poly:
    try:
        return parse_poly(x, nvars)
    except (ValueError, ZeroDivisionError) as exc:
        raise RecordError(path, f"bad polynomial {x!r}: {exc}") from None


def value_to_record(space: FormSpace, v: Sequence[Poly]):
    if space.kind == "scalar":
        return poly_to_str(v[0])
    if space.kind == "kernel":
        return [poly_to_str(x) for x in v]
    n = space.values.n
    return [[poly_to_str(v[r * n + c]) for c in range(n)] for r in range(n)]


def value_from_record(space: FormSpace, rec, path: str) -> tuple[Poly, ...]:
    nv = space.nvars
    if space.kind == "scalar":
        if isinstance(rec, list):
            raise RecordError(path, "scalar value expected")
        return (poly_from(rec, nv, path),)
    if space.kind == "kernel":
        if not isinstance(rec, list) or len(rec) != space.m:
            raise RecordError(path, f"expected a list of {space.m} coefficients")
        return tuple(poly_from(x, nv, f"{path}[{i}]") for i, x in enumerate(rec))
    n = space.values.n
    if not isinstance(rec, list) or len(rec) != n or any(not isinstance(r, list) or len(r) != n for r in rec):
        raise RecordError(path, f"expected a {n}x{n} matrix")
    return tuple(poly_from(x, nv, f"{path}[{r}][{c}]") for r, row in enumerate(rec) for c, x in enumerate(row))


def form_to_record(w: MixedForm) -> dict:
    d = w.space.base_dim
    comps = []
    for key in sorted(w.comps):
        comps.append(
            {
                "I": [k + 1 for k in key if k < d],
                "J": [k - d + 1 for k in key if k >= d],
                "value": value_to_record(w.space, w.comps[key]),
            }
        )
    return {"degree": w.degree, "values": w.space.kind, "components": comps}


def form_from_records(space: FormSpace, comps: Sequence[Mapping], path: str, degree: int | None = None) -> MixedForm:
    out = None
    for idx, c in enumerate(comps or []):
        p = f"{path}[{idx}]"
        if not isinstance(c, Mapping):
            raise RecordError(p, "expected a record with I, J and value")
        I = [int(i) - 1 for i in c.get("I", []) or []]
        J = [int(j) - 1 for j in c.get("J", []) or []]
        if any(not 0 <= i < space.base_dim for i in I) or any(not 0 <= j < space.m for j in J):
            raise RecordError(p, "leg index out of range")
        if "value" not in c:
            raise RecordError(p, "missing value")
        v = value_from_record(space, c["value"], f"{p}.value")
        term = space.monomial(I + [space.base_dim + j for j in J], v)
        if out is not None and term.degree != out.degree:
            raise RecordError(p, "components have different degrees")
        out = term if out is None else out + term
    if out is None:
        return space.zero(degree or 0)
    if degree is not None and out.degree != degree:
        raise RecordError(path, f"expected a {degree}-form")
    return out


def connection_to_record(kind: str, w: MixedForm) -> dict:
    if kind not in ("ordinary", "generalized", "rep"):
        raise ValueError(f"unknown connection kind {kind!r}")
    return {"kind": kind, "form": form_to_record(w)}


def ncg_form_to_record(calculus: str, w: MixedForm) -> dict:
    if calculus not in ("matrix_ncg", "endo_ncg"):
        raise ValueError(f"unknown calculus {calculus!r}")
    return {"calculus": calculus, "form": form_to_record(w)}


def matrix_to_record(a: Sequence[Poly]) -> list[list[str]]:
    n = mx.size_of(a)
    return [[poly_to_str(a[r * n + c]) for c in range(n)] for r in range(n)]


def value_summary(v: Sequence[Poly]) -> list[str]:
    return [poly_to_str(x) for x in v]
