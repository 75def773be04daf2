"""Finite-dimensional Lie algebras, representations and matrix-valued gauge fields.

Basis order convention: for :func:`make_sl` the Cartan elements
``H_k = E_kk - E_(k+1)(k+1)`` come first, then the off-diagonal units ``E_ij``
in lexicographic ``(i, j)`` order.  For ``n = 2`` this is ``(H, E, F)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

from . import matrices as mx
from .poly import Poly, apply_field, to_fraction

GammaField = tuple  # m-tuple of Poly: a polynomial map base -> g


@dataclass(frozen=True)
class LieAlgebra:
    """Lie algebra given by dense structure constants ``[e_i, e_j] = sum_k c[i][j][k] e_k``.

    ``matrix_basis`` (optional) realizes ``e_a`` as constant ``n x n`` matrices,
    stored flat.
    """

    dim: int
    structure_constants: tuple[tuple[tuple[Fraction, ...], ...], ...]
    matrix_basis: tuple[tuple[Fraction, ...], ...] | None = None
    name: str = ""

    def __post_init__(self) -> None:
        c = self.structure_constants
        if len(c) != self.dim or any(len(r) != self.dim or any(len(v) != self.dim for v in r) for r in c):
            raise ValueError(f"structure constants must be a {self.dim}x{self.dim}x{self.dim} array")
        if self.matrix_basis is not None and len(self.matrix_basis) != self.dim:
            raise ValueError("matrix basis must have one matrix per basis element")

    @classmethod
    def from_triples(
        cls,
        dim: int,
        triples: Iterable[tuple[int, int, int, Fraction | int | str]],
        matrix_basis: Sequence[Sequence] | None = None,
        name: str = "",
    ) -> LieAlgebra:
        """Build from ``(i, j, k, c)`` entries (0-based), filling in antisymmetry.

        Raises ``ValueError`` when an entry contradicts antisymmetry.
        """
        c = [[[Fraction(0)] * dim for _ in range(dim)] for _ in range(dim)]
        given: dict[tuple[int, int, int], Fraction] = {}
        for i, j, k, v in triples:
            v = to_fraction(v)
            for key, val in (((i, j, k), v), ((j, i, k), -v)):
                if key in given and given[key] != val:
                    raise ValueError(f"structure constants not antisymmetric at {key}")
                given[key] = val
            if i == j and v:
                raise ValueError(f"[e_{i}, e_{i}] must vanish")
            c[i][j][k] = v
            c[j][i][k] = -v
        basis = None
        if matrix_basis is not None:
            basis = tuple(tuple(to_fraction(x) for x in m) for m in matrix_basis)
        return cls(dim, tuple(tuple(tuple(r) for r in row) for row in c), basis, name)

    @classmethod
    def from_matrices(cls, basis: Sequence[Sequence[Fraction]], name: str = "") -> LieAlgebra:
        """Structure constants read off from commutators of a linearly independent matrix basis."""
        basis = tuple(tuple(Fraction(x) for x in m) for m in basis)
        dim = len(basis)
        solver = _CoordinateSolver(basis)
        c = []
        for i in range(dim):
            row = []
            for j in range(dim):
                row.append(tuple(solver.coords(mx.commutator(basis[i], basis[j]))))
            c.append(tuple(row))
        return cls(dim, tuple(c), basis, name)

    # -- structure ------------------------------------------------------------

    @property
    def matrix_size(self) -> int | None:
        if self.matrix_basis is None:
            return None
        return mx.size_of(self.matrix_basis[0])

    @cached_property
    def nonzero_brackets(self) -> tuple[tuple[int, int, int, Fraction], ...]:
        c = self.structure_constants
        return tuple(
            (i, j, k, c[i][j][k])
            for i in range(self.dim)
            for j in range(self.dim)
            for k in range(self.dim)
            if c[i][j][k]
        )

    @cached_property
    def ad_matrices(self) -> tuple[tuple[Fraction, ...], ...]:
        """``ad(e_a)`` as flat ``m x m`` matrices: ``(ad e_a)[k][j] = c[a][j][k]``."""
        m, c = self.dim, self.structure_constants
        return tuple(tuple(c[a][j][k] for k in range(m) for j in range(m)) for a in range(m))

    def bracket(self, u: Sequence, v: Sequence) -> tuple:
        """Bracket of coordinate vectors with entries in any commutative ring."""
        out: list = [u[0] * 0 + v[0] * 0 for _ in range(self.dim)] if self.dim else []
        for i, j, k, c in self.nonzero_brackets:
            if u[i] and v[j]:
                out[k] = out[k] + (u[i] * v[j]) * c
        return tuple(out)

    def basis_vector(self, a: int, nvars: int) -> GammaField:
        return tuple(Poly.const(int(i == a), nvars) for i in range(self.dim))

    # -- matrix realization -----------------------------------------------------

    @cached_property
    def _solver(self) -> _CoordinateSolver:
        if self.matrix_basis is None:
            raise ValueError(f"Lie algebra {self.name or ''} has no matrix realization")
        return _CoordinateSolver(self.matrix_basis)

    def coords(self, matrix: Sequence) -> tuple:
        """Coordinates of a matrix in the span of the matrix basis (exact; raises if outside)."""
        return self._solver.coords(matrix)

    def to_matrix(self, coords: Sequence, nvars: int | None = None) -> tuple:
        if self.matrix_basis is None:
            raise ValueError("Lie algebra has no matrix realization")
        n2 = len(self.matrix_basis[0])
        if nvars is None:
            out = [Fraction(0)] * n2
        else:
            out = [Poly.zero(nvars)] * n2
        for a, ca in enumerate(coords):
            if not ca:
                continue
            for idx, x in enumerate(self.matrix_basis[a]):
                if x:
                    out[idx] = out[idx] + ca * x
        return tuple(out)


class _CoordinateSolver:
    """Exact left inverse of the map ``coords -> sum coords[a] * basis[a]``."""

    def __init__(self, basis: Sequence[Sequence[Fraction]]):
        self.basis = basis
        dim = len(basis)
        # pivot columns are matrix positions on which the basis is independent
        _, pivots = mx.rref(basis) if dim else ([], [])
        if len(pivots) != dim:
            raise ValueError("matrix basis is linearly dependent")
        self.rows = pivots
        square = [[basis[a][r] for a in range(dim)] for r in pivots]
        self.inverse = mx.invert(square)

    def coords(self, matrix: Sequence) -> tuple:
        dim = len(self.basis)
        picked = [matrix[r] for r in self.rows]
        out = []
        for a in range(dim):
            acc = None
            for b, coef in enumerate(self.inverse[a]):
                if coef and picked[b]:
                    t = picked[b] * coef
                    acc = t if acc is None else acc + t
            out.append(acc if acc is not None else matrix[0] * 0)
        residual = mx.mat_sub(matrix, self._combine(out, matrix[0] * 0))
        if any(residual):
            raise ValueError("matrix is not in the span of the Lie algebra basis")
        return tuple(out)

    def _combine(self, coords: Sequence, zero) -> tuple:
        out = [zero] * len(self.basis[0])
        for a, ca in enumerate(coords):
            if not ca:
                continue
            for idx, x in enumerate(self.basis[a]):
                if x:
                    out[idx] = out[idx] + ca * x
        return tuple(out)


# -- validation -----------------------------------------------------------------

def is_antisymmetric(alg: LieAlgebra) -> bool:
    c, m = alg.structure_constants, alg.dim
    return all(c[i][j][k] == -c[j][i][k] for i in range(m) for j in range(m) for k in range(m))


def jacobi_defect(alg: LieAlgebra, i: int, j: int, k: int) -> tuple[Fraction, ...]:
    """Coordinates of ``[[e_i,e_j],e_k] + [[e_j,e_k],e_i] + [[e_k,e_i],e_j]``."""
    m, c = alg.dim, alg.structure_constants
    out = [Fraction(0)] * m
    for a, b, cc in ((i, j, k), (j, k, i), (k, i, j)):
        for p in range(m):
            if c[a][b][p]:
                for q in range(m):
                    out[q] += c[a][b][p] * c[p][cc][q]
    return tuple(out)


def validate_jacobi(alg: LieAlgebra) -> bool:
    m = alg.dim
    return all(
        not any(jacobi_defect(alg, i, j, k))
        for i in range(m)
        for j in range(i + 1, m)
        for k in range(j + 1, m)
    )


def matrix_basis_consistent(alg: LieAlgebra) -> bool:
    if alg.matrix_basis is None:
        return True
    m = alg.dim
    for i in range(m):
        for j in range(m):
            lhs = mx.commutator(alg.matrix_basis[i], alg.matrix_basis[j])
            rhs = alg.to_matrix(alg.structure_constants[i][j])
            if lhs != rhs:
                return False
    return True


def check_lie_algebra(alg: LieAlgebra) -> None:
    """Raise ``ValueError`` naming the first violated invariant."""
    if not is_antisymmetric(alg):
        raise ValueError("structure constants are not antisymmetric")
    m = alg.dim
    for i in range(m):
        for j in range(i + 1, m):
            for k in range(j + 1, m):
                if any(jacobi_defect(alg, i, j, k)):
                    raise ValueError(f"Jacobi identity fails on basis triple ({i + 1}, {j + 1}, {k + 1})")
    if not matrix_basis_consistent(alg):
        raise ValueError("matrix basis commutators do not reproduce the structure constants")


# -- constructors -----------------------------------------------------------------

def make_abelian(m: int) -> LieAlgebra:
    zero = tuple(tuple(tuple(Fraction(0) for _ in range(m)) for _ in range(m)) for _ in range(m))
    return LieAlgebra(m, zero, None, f"abelian{m}")


def sl_basis(n: int) -> list[tuple[Fraction, ...]]:
    basis = []
    for k in range(n - 1):
        basis.append(mx.mat_sub(mx.elementary(k, k, n), mx.elementary(k + 1, k + 1, n)))
    for i in range(n):
        for j in range(n):
            if i != j:
                basis.append(mx.elementary(i, j, n))
    return basis


def make_sl(n: int) -> LieAlgebra:
    if n < 2:
        raise ValueError("sl_n requires n >= 2")
    return LieAlgebra.from_matrices(sl_basis(n), name=f"sl{n}")


def upper_positions(n: int) -> list[tuple[int, int]]:
    """Strictly upper positions ordered by superdiagonal, then row."""
    return [(i, i + s) for s in range(1, n) for i in range(n - s)]


def make_upper_nilpotent(n: int) -> LieAlgebra:
    """Strictly upper triangular ``n x n`` matrices (Lie algebra of the unipotent group)."""
    if n < 2:
        raise ValueError("need n >= 2")
    basis = [mx.elementary(i, j, n) for i, j in upper_positions(n)]
    return LieAlgebra.from_matrices(basis, name=f"n{n}")


def make_heisenberg() -> LieAlgebra:
    """``[e1, e2] = e3`` realized by ``E12, E23, E13`` in 3x3 matrices."""
    alg = make_upper_nilpotent(3)
    return LieAlgebra(alg.dim, alg.structure_constants, alg.matrix_basis, "heisenberg")


# -- representations ----------------------------------------------------------------

@dataclass(frozen=True)
class Representation:
    """Lie algebra morphism ``g -> gl_n`` given on the basis (flat constant matrices)."""

    alg: LieAlgebra
    matrices: tuple[tuple[Fraction, ...], ...]
    name: str = ""

    @property
    def n(self) -> int:
        return mx.size_of(self.matrices[0])

    def __call__(self, coords: Sequence, nvars: int | None = None) -> tuple:
        n2 = len(self.matrices[0])
        out = [Poly.zero(nvars) if nvars is not None else Fraction(0)] * n2
        for a, ca in enumerate(coords):
            if not ca:
                continue
            for idx, x in enumerate(self.matrices[a]):
                if x:
                    out[idx] = out[idx] + ca * x
        return tuple(out)


def representation_defects(rep: Representation) -> list[tuple[int, int]]:
    bad = []
    alg = rep.alg
    for i in range(alg.dim):
        for j in range(i + 1, alg.dim):
            lhs = rep(alg.structure_constants[i][j])
            rhs = mx.commutator(rep.matrices[i], rep.matrices[j])
            if lhs != rhs:
                bad.append((i, j))
    return bad


def check_representation(rep: Representation) -> None:
    if len(rep.matrices) != rep.alg.dim:
        raise ValueError("representation needs one matrix per basis element")
    bad = representation_defects(rep)
    if bad:
        i, j = bad[0]
        raise ValueError(f"rep([e_{i + 1}, e_{j + 1}]) differs from the commutator of the images")


def defining_rep(alg: LieAlgebra) -> Representation:
    if alg.matrix_basis is None:
        raise ValueError("defining representation needs a matrix basis")
    return Representation(alg, alg.matrix_basis, "defining")


def adjoint_rep(alg: LieAlgebra) -> Representation:
    return Representation(alg, alg.ad_matrices, "adjoint")


# -- Lie-algebra-valued functions ----------------------------------------------------

def gamma_field(alg: LieAlgebra, entries: Sequence[Poly]) -> GammaField:
    if len(entries) != alg.dim:
        raise ValueError(f"expected {alg.dim} components, got {len(entries)}")
    return tuple(entries)


def bracket_gamma(alg: LieAlgebra, a: GammaField, b: GammaField) -> GammaField:
    """Pointwise bracket of two polynomial maps into ``g``."""
    if len(a) != alg.dim or len(b) != alg.dim:
        raise ValueError("gamma field dimension does not match the Lie algebra")
    return alg.bracket(a, b)


def apply_field_gamma(field: Sequence[Poly], gamma: GammaField) -> GammaField:
    return tuple(apply_field(field, g) for g in gamma)


def traceless_projection(m: Sequence) -> tuple:
    """``M - (tr M / n) 1``."""
    n = mx.size_of(m)
    t = mx.trace(m) / n if isinstance(m[0], Poly) else Fraction(mx.trace(m)) / n
    return tuple(x - t if i % (n + 1) == 0 else x for i, x in enumerate(m))


# -- gauge group elements -------------------------------------------------------------

@dataclass(frozen=True)
class GroupElementField:
    """Polynomial map base -> SL(n) together with its polynomial inverse."""

    matrix: tuple[Poly, ...]
    inverse_matrix: tuple[Poly, ...]
    shears: tuple[tuple[int, int, Poly], ...] = field(default=(), compare=False)

    @property
    def n(self) -> int:
        return mx.size_of(self.matrix)

    @property
    def nvars(self) -> int:
        return self.matrix[0].nvars

    def __mul__(self, other: GroupElementField) -> GroupElementField:
        return GroupElementField(
            mx.mat_mul(self.matrix, other.matrix),
            mx.mat_mul(other.inverse_matrix, self.inverse_matrix),
            self.shears + other.shears,
        )

    def inverse(self) -> GroupElementField:
        inv_shears = tuple((i, j, -p) for i, j, p in reversed(self.shears))
        return GroupElementField(self.inverse_matrix, self.matrix, inv_shears)


def identity_element(n: int, nvars: int) -> GroupElementField:
    eye = mx.identity(n, nvars)
    return GroupElementField(eye, eye, ())


def shear(i: int, j: int, p: Poly, n: int) -> GroupElementField:
    """Elementary shear ``1 + p E_ij`` (0-based, ``i != j``); inverse ``1 - p E_ij``."""
    if i == j:
        raise ValueError("shear needs i != j")
    eye = mx.identity(n, p.nvars)
    g = list(eye)
    ginv = list(eye)
    g[i * n + j] = p
    ginv[i * n + j] = -p
    return GroupElementField(tuple(g), tuple(ginv), ((i, j, p),))


def shear_product(factors: Sequence[tuple[int, int, Poly]], n: int, nvars: int) -> GroupElementField:
    out = identity_element(n, nvars)
    for i, j, p in factors:
        out = out * shear(i, j, p, n)
    return out


def group_element_defects(g: GroupElementField) -> list[str]:
    n, nv = g.n, g.nvars
    eye = mx.identity(n, nv)
    bad = []
    if mx.mat_mul(g.matrix, g.inverse_matrix) != eye or mx.mat_mul(g.inverse_matrix, g.matrix) != eye:
        bad.append("inverse_matrix is not a two-sided inverse")
    if mx.det(g.matrix) != Poly.const(1, nv):
        bad.append("determinant is not 1")
    return bad
