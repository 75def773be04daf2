"""Atlases of ``TLA`` charts: transition data, cocycles, gluing.

Charts share one coordinate ring (overlaps are formal).  A transition
``(alpha_ij, chi_ij)`` sends chart-``j`` kernel components to chart ``i``:
``gamma_i = alpha_ij(gamma_j) + chi_ij(X)``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from itertools import product
from typing import Mapping, Sequence

from . import matrices as mx
from .forms import FormSpace, differential, endo_values, evaluate
from .lie import GroupElementField, LieAlgebra, defining_rep, identity_element
from .poly import Poly, apply_field, zeros


@dataclass(frozen=True)
class Chart:
    id: str
    patch: str = ""


@dataclass(frozen=True)
class Transition:
    alpha: tuple[Poly, ...]  # m x m, acts on kernel coordinates
    chi: tuple[tuple[Poly, ...], ...]  # chi(d_mu), one gamma field per base direction

    def apply_alpha(self, gamma: Sequence[Poly]) -> tuple[Poly, ...]:
        m = len(gamma)
        return tuple(
            sum((self.alpha[a * m + b] * gamma[b] for b in range(m) if gamma[b]), Poly.zero(gamma[0].nvars))
            for a in range(m)
        )

    def apply_chi(self, X: Sequence[Poly]) -> tuple[Poly, ...]:
        m = len(self.chi[0])
        nv = X[0].nvars
        out = list(zeros(m, nv))
        for mu, xm in enumerate(X):
            if xm:
                out = [o + xm * c for o, c in zip(out, self.chi[mu])]
        return tuple(out)


@dataclass
class TransitionData:
    alg: LieAlgebra
    d: int
    charts: list[Chart]
    pairs: dict[tuple[str, str], Transition] = field(default_factory=dict)

    @property
    def nvars(self) -> int:
        return self.d

    def ids(self) -> list[str]:
        return [c.id for c in self.charts]

    def get(self, i: str, j: str) -> Transition:
        try:
            return self.pairs[(i, j)]
        except KeyError:
            raise KeyError(f"no transition for pair ({i}, {j})") from None


@dataclass(frozen=True)
class CocycleFailure:
    triple: tuple[str, str, str]
    relation: str
    defect: tuple[Poly, ...]


@dataclass(frozen=True)
class CocycleReport:
    ok: bool
    failures: tuple[CocycleFailure, ...]

    @property
    def first(self) -> CocycleFailure | None:
        return self.failures[0] if self.failures else None

    def __bool__(self) -> bool:
        return self.ok


class NotMultiplicative(ValueError):
    pass


class GlueError(ValueError):
    def __init__(self, pair: tuple[str, str], defect: tuple[Poly, ...]):
        self.pair = pair
        self.defect = defect
        super().__init__(f"overlap data inconsistent on pair {pair}: defect {[str(p) for p in defect]}")


# -- transitions from group-valued functions ----------------------------------------------

def alpha_from_group(alg: LieAlgebra, g: GroupElementField) -> tuple[Poly, ...]:
    """Matrix of ``gamma -> g gamma g^-1`` in the basis of ``alg``."""
    m = alg.dim
    nv = g.nvars
    cols = []
    for e in alg.matrix_basis:
        em = mx.const_matrix(e, nv)
        cols.append(alg.coords(mx.mat_mul(mx.mat_mul(g.matrix, em), g.inverse_matrix)))
    return tuple(cols[b][a] for a in range(m) for b in range(m))


def chi_direct(alg: LieAlgebra, g: GroupElementField, X: Sequence[Poly]) -> tuple[Poly, ...]:
    """``g (X . g^-1)`` by entrywise differentiation."""
    return alg.coords(mx.mat_mul(g.matrix, mx.apply_field_matrix(X, g.inverse_matrix)))


def chi_de_rham(alg: LieAlgebra, g: GroupElementField, X: Sequence[Poly]) -> tuple[Poly, ...]:
    """``g d(g^-1)(X)`` with ``d`` the differential of matrix-valued forms."""
    space = FormSpace(len(X), endo_values(defining_rep(alg)))
    dginv = differential(space.function(g.inverse_matrix))
    val = evaluate(dginv, [space.element(X, None)])
    return alg.coords(mx.mat_mul(g.matrix, val))


def _coordinate_field(mu: int, d: int) -> tuple[Poly, ...]:
    return tuple(Poly.const(1 if k == mu else 0, d) for k in range(d))


def transition_from_group(alg: LieAlgebra, g: GroupElementField, d: int) -> Transition:
    chi = tuple(chi_de_rham(alg, g, _coordinate_field(mu, d)) for mu in range(d))
    return Transition(alpha_from_group(alg, g), chi)


def complete_group_family(
    charts: Sequence[str], g: Mapping[tuple[str, str], GroupElementField], n: int, d: int
) -> dict[tuple[str, str], GroupElementField]:
    """Fill in ``g_ii = 1`` and ``g_ji = g_ij^-1``."""
    full = dict(g)
    for i in charts:
        full.setdefault((i, i), identity_element(n, d))
    for (i, j), gij in list(g.items()):
        full.setdefault((j, i), gij.inverse())
    return full


def multiplicativity_defects(charts: Sequence[str], g: Mapping[tuple[str, str], GroupElementField]) -> list:
    bad = []
    for i, j, k in product(charts, repeat=3):
        if (i, j) in g and (j, k) in g and (i, k) in g:
            if mx.mat_mul(g[(i, j)].matrix, g[(j, k)].matrix) != g[(i, k)].matrix:
                bad.append((i, j, k))
    return bad


def transitions_from_bundle(
    alg: LieAlgebra, charts: Sequence[str], g: Mapping[tuple[str, str], GroupElementField], d: int
) -> TransitionData:
    """``alpha_ij = Ad_{g_ij}``, ``chi_ij(X) = g_ij d g_ij^-1 (X)``."""
    if alg.matrix_basis is None:
        raise ValueError("transition functions need a matrix Lie algebra")
    n = alg.matrix_size
    full = complete_group_family(charts, g, n, d)
    bad = multiplicativity_defects(charts, full)
    if bad:
        raise NotMultiplicative(f"g_ij g_jk != g_ik on triple {bad[0]}")
    missing = [(i, j) for i in charts for j in charts if (i, j) not in full]
    if missing:
        raise ValueError(f"no transition function for pair {missing[0]}")
    pairs = {key: transition_from_group(alg, gij, d) for key, gij in full.items()}
    return TransitionData(alg, d, [Chart(c) for c in charts], pairs)


# -- cocycle validation -----------------------------------------------------------------------

def validate_cocycle(t: TransitionData) -> CocycleReport:
    """Check ``alpha_ik = alpha_ij alpha_jk`` and ``chi_ik = alpha_ij chi_jk + chi_ij`` on every ordered triple."""
    failures = []
    m = t.alg.dim
    nv = t.nvars
    ids = t.ids()
    for i in ids:
        tii = t.get(i, i)
        if tii.alpha != mx.identity(m, nv):
            failures.append(CocycleFailure((i, i, i), "alpha_ii = id", mx.mat_sub(tii.alpha, mx.identity(m, nv))))
    for i, j, k in product(ids, repeat=3):
        tij, tjk, tik = t.get(i, j), t.get(j, k), t.get(i, k)
        da = mx.mat_sub(tik.alpha, mx.mat_mul(tij.alpha, tjk.alpha))
        if any(da):
            failures.append(CocycleFailure((i, j, k), "alpha_ik = alpha_ij alpha_jk", da))
        for mu in range(t.d):
            rhs = tuple(a + b for a, b in zip(tij.apply_alpha(tjk.chi[mu]), tij.chi[mu]))
            dc = tuple(a - b for a, b in zip(tik.chi[mu], rhs))
            if any(dc):
                failures.append(CocycleFailure((i, j, k), f"chi_ik = alpha_ij chi_jk + chi_ij on d/dx{mu + 1}", dc))
    return CocycleReport(not failures, tuple(failures))


def automorphism_defects(t: TransitionData) -> list[tuple[str, str]]:
    """Pairs where ``alpha_ij`` fails to preserve brackets of basis elements."""
    bad = []
    alg = t.alg
    nv = t.nvars
    for key, tr in t.pairs.items():
        for a in range(alg.dim):
            for b in range(a + 1, alg.dim):
                ea, eb = alg.basis_vector(a, nv), alg.basis_vector(b, nv)
                lhs = tr.apply_alpha(alg.bracket(ea, eb))
                rhs = alg.bracket(tr.apply_alpha(ea), tr.apply_alpha(eb))
                if lhs != rhs:
                    bad.append(key)
                    break
            else:
                continue
            break
    return bad


# -- gluing ----------------------------------------------------------------------------------

@dataclass(frozen=True)
class LocalElementFamily:
    X: tuple[Poly, ...]
    gammas: dict[str, tuple[Poly, ...]]


def glue(t: TransitionData, X: Sequence[Poly], partial: Mapping[str, Sequence[Poly]]) -> LocalElementFamily:
    """Complete ``{gamma_i}`` from the given charts via ``gamma_i = alpha_ij(gamma_j) + chi_ij(X)``."""
    X = tuple(X)
    if len(X) != t.d:
        raise ValueError("vector field has the wrong dimension")
    ids = t.ids()
    unknown = set(partial) - set(ids)
    if unknown:
        raise ValueError(f"unknown chart {sorted(unknown)[0]}")
    if not partial:
        raise ValueError("gluing needs data on at least one chart")
    gammas = {i: tuple(v) for i, v in partial.items()}
    queue = deque(i for i in ids if i in gammas)
    while queue:
        j = queue.popleft()
        for i in ids:
            if i in gammas or (i, j) not in t.pairs:
                continue
            tr = t.pairs[(i, j)]
            gammas[i] = tuple(a + b for a, b in zip(tr.apply_alpha(gammas[j]), tr.apply_chi(X)))
            queue.append(i)
    missing = [i for i in ids if i not in gammas]
    if missing:
        raise ValueError(f"chart {missing[0]} is not reachable from the given data")
    for i, j in product(ids, repeat=2):
        defect = gluing_defect(t, X, gammas, i, j)
        if any(defect):
            raise GlueError((i, j), defect)
    return LocalElementFamily(X, gammas)


def gluing_defect(t: TransitionData, X, gammas, i: str, j: str) -> tuple[Poly, ...]:
    tr = t.get(i, j)
    rhs = tuple(a + b for a, b in zip(tr.apply_alpha(gammas[j]), tr.apply_chi(X)))
    return tuple(a - b for a, b in zip(gammas[i], rhs))


def perturb_chi(t: TransitionData, pair: tuple[str, str], mu: int, delta: Sequence[Poly]) -> TransitionData:
    """Copy of ``t`` with ``chi_pair(d_mu)`` shifted by ``delta``."""
    tr = t.get(*pair)
    chi = list(tr.chi)
    chi[mu] = tuple(a + b for a, b in zip(chi[mu], delta))
    pairs = dict(t.pairs)
    pairs[pair] = Transition(tr.alpha, tuple(chi))
    return TransitionData(t.alg, t.d, list(t.charts), pairs)


def vector_field_action(X: Sequence[Poly], f: Poly) -> Poly:
    return apply_field(X, f)
