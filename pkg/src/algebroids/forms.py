"""Forms on the trivial Lie algebroid ``TLA(M, g) = TM + (M x g)``.

A :class:`FormSpace` fixes the base dimension ``d``, the Lie algebra ``g`` and
the value space.  The algebroid has the global basis of "legs"
``0..d-1`` (coordinate fields ``d_mu + 0``) followed by ``d..d+m-1``
(constant ``0 + e_a``); the dual legs are ``dx^mu`` and ``theta^a``.  A
:class:`MixedForm` stores the coefficient of each ``e^K = e^{k1} ^ ... ^ e^{kr}``
for sorted leg tuples ``K`` (so ``dx`` legs always precede ``theta`` legs).

Evaluation uses the determinant convention
``e^K(X_1..X_r) = det[e^{k_i}(X_j)]``, which is the one matching the
``1/(p! q!)`` normalized product.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence

from . import matrices as mx
from .lie import LieAlgebra, Representation
from .poly import Poly, apply_field, field_bracket, zeros

Value = tuple  # flat tuple of Poly; layout fixed by the value space


# -- value spaces ---------------------------------------------------------------

@dataclass(frozen=True)
class ValueSpace:
    """Where forms take values: ``scalar``, ``kernel`` (g, adjoint) or ``endo`` (n x n, commutator)."""

    kind: str
    alg: LieAlgebra
    rep: Representation | None = None

    def __post_init__(self) -> None:
        if self.kind not in ("scalar", "kernel", "endo"):
            raise ValueError(f"unknown value space {self.kind!r}")
        if self.kind == "endo":
            if self.rep is None:
                raise ValueError("endo values need a representation of g")
            if self.rep.alg.dim != self.alg.dim:
                raise ValueError("representation is for a different Lie algebra")

    @property
    def size(self) -> int:
        if self.kind == "scalar":
            return 1
        if self.kind == "kernel":
            return self.alg.dim
        return len(self.rep.matrices[0])

    @property
    def n(self) -> int:
        """Matrix size for endo values."""
        return self.rep.n

    def act(self, a: int, v: Value) -> Value:
        """Action of the basis element ``e_a`` on a value."""
        if self.kind == "scalar":
            return zeros(1, v[0].nvars)
        if self.kind == "kernel":
            ad = self.alg.ad_matrices[a]
            m = self.alg.dim
            out = []
            for k in range(m):
                acc = Poly.zero(v[0].nvars)
                for j in range(m):
                    c = ad[k * m + j]
                    if c and v[j]:
                        acc = acc + v[j] * c
                out.append(acc)
            return tuple(out)
        r = self.rep.matrices[a]
        return mx.mat_sub(mx.mat_mul(r, v), mx.mat_mul(v, r))

    def product(self, v: Value, w: Value, left_kind: str, right_kind: str) -> Value:
        if left_kind == "scalar":
            return tuple(v[0] * x for x in w)
        if right_kind == "scalar":
            return tuple(x * w[0] for x in v)
        if left_kind == right_kind == "endo":
            return mx.mat_mul(v, w)
        raise ValueError(f"no product between {left_kind} and {right_kind} values")

    def bracket(self, v: Value, w: Value) -> Value:
        if self.kind == "kernel":
            return self.alg.bracket(v, w)
        if self.kind == "endo":
            return mx.commutator(v, w)
        return zeros(1, v[0].nvars)


def scalar_values(alg: LieAlgebra) -> ValueSpace:
    return ValueSpace("scalar", alg)


def kernel_values(alg: LieAlgebra) -> ValueSpace:
    return ValueSpace("kernel", alg)


def endo_values(rep: Representation) -> ValueSpace:
    return ValueSpace("endo", rep.alg, rep)


# -- algebroid elements -----------------------------------------------------------

@dataclass(frozen=True)
class TlaElement:
    """``X + gamma``: a polynomial vector field plus a polynomial map into ``g``."""

    X: tuple[Poly, ...]
    gamma: tuple[Poly, ...]

    @property
    def coords(self) -> tuple[Poly, ...]:
        return self.X + self.gamma

    @property
    def nvars(self) -> int:
        return (self.X + self.gamma)[0].nvars

    def anchor(self) -> tuple[Poly, ...]:
        return self.X

    def scale(self, f: Poly) -> TlaElement:
        return TlaElement(tuple(f * x for x in self.X), tuple(f * g for g in self.gamma))

    def __add__(self, other: TlaElement) -> TlaElement:
        return TlaElement(
            tuple(a + b for a, b in zip(self.X, other.X)),
            tuple(a + b for a, b in zip(self.gamma, other.gamma)),
        )

    def __neg__(self) -> TlaElement:
        return TlaElement(tuple(-x for x in self.X), tuple(-g for g in self.gamma))


def tla_bracket(alg: LieAlgebra, a: TlaElement, b: TlaElement) -> TlaElement:
    """``[X+g, Y+h] = [X,Y] + (X.h - Y.g + [g,h])``."""
    if len(a.X) != len(b.X) or len(a.gamma) != alg.dim or len(b.gamma) != alg.dim:
        raise ValueError("algebroid elements have mismatched dimensions")
    xy = field_bracket(a.X, b.X)
    gh = alg.bracket(a.gamma, b.gamma)
    gamma = tuple(
        apply_field(a.X, h) - apply_field(b.X, g) + c for g, h, c in zip(a.gamma, b.gamma, gh)
    )
    return TlaElement(xy, gamma)


def inject_kernel(gamma: Sequence[Poly], d: int) -> TlaElement:
    """``iota(gamma) = 0 + gamma``."""
    nv = gamma[0].nvars
    return TlaElement(zeros(d, nv), tuple(gamma))


# -- form spaces ------------------------------------------------------------------

@dataclass(frozen=True)
class FormSpace:
    """``Omega^*(TLA(M, g)) (x) W`` with ``dim M = base_dim``."""

    base_dim: int
    values: ValueSpace

    @property
    def alg(self) -> LieAlgebra:
        return self.values.alg

    @property
    def m(self) -> int:
        return self.values.alg.dim

    @property
    def nlegs(self) -> int:
        return self.base_dim + self.m

    @property
    def nvars(self) -> int:
        return self.base_dim

    @property
    def kind(self) -> str:
        return self.values.kind

    def with_values(self, values: ValueSpace) -> FormSpace:
        return FormSpace(self.base_dim, values)

    def scalar(self) -> FormSpace:
        return FormSpace(self.base_dim, scalar_values(self.alg))

    # -- constructors --

    def zero_value(self) -> Value:
        return zeros(self.values.size, self.nvars)

    def zero(self, degree: int) -> MixedForm:
        return MixedForm(self, degree, {})

    def function(self, value: Sequence[Poly]) -> MixedForm:
        """Degree-0 form with the given value."""
        return MixedForm(self, 0, {(): tuple(value)})

    def monomial(self, legs: Sequence[int], value: Sequence[Poly]) -> MixedForm:
        sign, key = sort_legs(legs)
        if not sign:
            return self.zero(len(legs))
        return MixedForm(self, len(legs), {key: tuple(sign * x for x in value)})

    def dx(self, mu: int, value: Sequence[Poly] | None = None) -> MixedForm:
        if value is None:
            value = self._unit()
        return self.monomial((mu,), value)

    def theta(self, a: int, value: Sequence[Poly] | None = None) -> MixedForm:
        if value is None:
            value = self._unit()
        return self.monomial((self.base_dim + a,), value)

    def _unit(self) -> Value:
        if self.kind != "scalar":
            raise ValueError("default unit value only exists for scalar forms")
        return (Poly.const(1, self.nvars),)

    def tautological(self) -> MixedForm:
        """``theta = sum_a theta^a (x) e_a`` (kernel values): ``theta(0 + g) = g``."""
        if self.kind != "kernel":
            raise ValueError("the tautological form is kernel-valued")
        comps = {}
        for a in range(self.m):
            comps[(self.base_dim + a,)] = self.alg.basis_vector(a, self.nvars)
        return MixedForm(self, 1, comps)

    # -- algebroid action on values --

    def leg_action(self, leg: int, v: Value) -> Value:
        """Action of the basis element for ``leg`` on a value."""
        if leg < self.base_dim:
            return tuple(x.diff(leg) for x in v)
        return self.values.act(leg - self.base_dim, v)

    def act(self, x: TlaElement, v: Value) -> Value:
        """``phi(X + g).v = X.v + g |> v``."""
        out = [apply_field(x.X, c) for c in v]
        if self.kind != "scalar":
            for a, ga in enumerate(x.gamma):
                if ga:
                    av = self.values.act(a, v)
                    out = [o + ga * t for o, t in zip(out, av)]
        return tuple(out)

    def bracket(self, a: TlaElement, b: TlaElement) -> TlaElement:
        return tla_bracket(self.alg, a, b)

    def element(self, X: Sequence[Poly] | None = None, gamma: Sequence[Poly] | None = None) -> TlaElement:
        X = tuple(X) if X is not None else zeros(self.base_dim, self.nvars)
        gamma = tuple(gamma) if gamma is not None else zeros(self.m, self.nvars)
        if len(X) != self.base_dim or len(gamma) != self.m:
            raise ValueError("element does not match the algebroid dimensions")
        return TlaElement(X, gamma)

    def basis_element(self, leg: int) -> TlaElement:
        one, z = Poly.const(1, self.nvars), Poly.zero(self.nvars)
        coords = [one if i == leg else z for i in range(self.nlegs)]
        return TlaElement(tuple(coords[: self.base_dim]), tuple(coords[self.base_dim :]))


# -- sign helpers -------------------------------------------------------------------

def sort_legs(legs: Sequence[int]) -> tuple[int, tuple[int, ...]]:
    """Sign of the sorting permutation (0 if a leg repeats) and the sorted tuple."""
    arr = list(legs)
    sign = 1
    for i in range(1, len(arr)):
        j = i
        while j > 0 and arr[j - 1] > arr[j]:
            arr[j - 1], arr[j] = arr[j], arr[j - 1]
            sign = -sign
            j -= 1
    for i in range(1, len(arr)):
        if arr[i] == arr[i - 1]:
            return 0, ()
    return sign, tuple(arr)


def _add_into(acc: dict, key: tuple, value: Value, coef: int | Fraction = 1) -> None:
    if coef != 1:
        value = tuple(x * coef for x in value)
    prev = acc.get(key)
    acc[key] = value if prev is None else tuple(p + x for p, x in zip(prev, value))


# -- forms ---------------------------------------------------------------------------

class MixedForm:
    """Homogeneous form of total degree ``degree`` in a :class:`FormSpace`."""

    __slots__ = ("space", "degree", "comps")

    def __init__(self, space: FormSpace, degree: int, comps: Mapping[tuple[int, ...], Value]):
        if degree < 0:
            raise ValueError("negative form degree")
        size = space.values.size
        clean = {}
        for key, v in comps.items():
            if len(key) != degree:
                raise ValueError(f"component {key} does not have degree {degree}")
            if len(v) != size:
                raise ValueError(f"value of length {len(v)} does not fit {space.kind} values")
            if any(v):
                clean[tuple(key)] = tuple(v)
        self.space = space
        self.degree = degree
        self.comps = clean

    # -- linear structure --

    def _check(self, other: MixedForm) -> None:
        if self.space != other.space:
            raise ValueError("forms live in different form spaces")
        if self.degree != other.degree:
            raise ValueError(f"cannot add forms of degree {self.degree} and {other.degree}")

    def __add__(self, other: MixedForm) -> MixedForm:
        self._check(other)
        acc = dict(self.comps)
        for k, v in other.comps.items():
            _add_into(acc, k, v)
        return MixedForm(self.space, self.degree, acc)

    def __neg__(self) -> MixedForm:
        return MixedForm(self.space, self.degree, {k: tuple(-x for x in v) for k, v in self.comps.items()})

    def __sub__(self, other: MixedForm) -> MixedForm:
        return self + (-other)

    def scale(self, f: Poly | int | Fraction) -> MixedForm:
        """Multiply by a function on the base (or a rational)."""
        return MixedForm(self.space, self.degree, {k: tuple(f * x for x in v) for k, v in self.comps.items()})

    def __mul__(self, f: Poly | int | Fraction) -> MixedForm:
        return self.scale(f)

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MixedForm):
            return NotImplemented
        return self.space == other.space and self.degree == other.degree and self.comps == other.comps

    __hash__ = None  # type: ignore[assignment]

    def is_zero(self) -> bool:
        return not self.comps

    def __repr__(self) -> str:
        return f"MixedForm(degree={self.degree}, kind={self.space.kind}, components={len(self.comps)})"

    # -- bigrading --

    def bidegree_of(self, key: tuple[int, ...]) -> tuple[int, int]:
        p = sum(1 for k in key if k < self.space.base_dim)
        return p, len(key) - p

    def part(self, p: int, q: int) -> MixedForm:
        """Component of de Rham degree ``p`` and exterior-dual degree ``q``."""
        return MixedForm(
            self.space, self.degree, {k: v for k, v in self.comps.items() if self.bidegree_of(k) == (p, q)}
        )

    def bidegrees(self) -> set[tuple[int, int]]:
        return {self.bidegree_of(k) for k in self.comps}

    def component(self, dx: Iterable[int] = (), theta: Iterable[int] = ()) -> Value:
        """Coefficient of ``dx^I ^ theta^J`` (0-based indices, any order)."""
        legs = list(dx) + [self.space.base_dim + a for a in theta]
        sign, key = sort_legs(legs)
        v = self.comps.get(key)
        if v is None or not sign:
            return self.space.zero_value()
        return tuple(sign * x for x in v)

    def map_values(self, fn: Callable[[Value], Value], space: FormSpace | None = None) -> MixedForm:
        space = space or self.space
        return MixedForm(space, self.degree, {k: fn(v) for k, v in self.comps.items()})

    def max_poly_degree(self) -> int:
        return max((x.degree for v in self.comps.values() for x in v), default=-1)


# -- evaluation -----------------------------------------------------------------------

def _det(rows: list[list[Poly]], nvars: int) -> Poly:
    r = len(rows)
    if r == 0:
        return Poly.const(1, nvars)
    if r == 1:
        return rows[0][0]
    if r == 2:
        return rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0]
    total = Poly.zero(nvars)
    for j in range(r):
        if not rows[0][j]:
            continue
        minor = [row[:j] + row[j + 1 :] for row in rows[1:]]
        term = rows[0][j] * _det(minor, nvars)
        total = total + term if j % 2 == 0 else total - term
    return total


def evaluate(w: MixedForm, args: Sequence[TlaElement]) -> Value:
    """``w(X_1, ..., X_r)``: multilinear, antisymmetric."""
    if len(args) != w.degree:
        raise ValueError(f"a {w.degree}-form takes {w.degree} arguments, got {len(args)}")
    sp = w.space
    nv = sp.nvars
    coords = [a.coords for a in args]
    for c in coords:
        if len(c) != sp.nlegs:
            raise ValueError("argument does not belong to this algebroid")
    out = [Poly.zero(nv)] * sp.values.size
    for key, v in w.comps.items():
        rows = [[c[k] for c in coords] for k in key]
        if any(not any(row) for row in rows):
            continue
        dt = _det(rows, nv)
        if dt:
            out = [o + dt * x for o, x in zip(out, v)]
    return tuple(out)


# -- products ----------------------------------------------------------------------------

def _result_space(s1: FormSpace, s2: FormSpace) -> FormSpace:
    if s1.base_dim != s2.base_dim or s1.alg != s2.alg:
        raise ValueError("forms live over different algebroids")
    if s1.kind == "scalar":
        return s2
    if s2.kind == "scalar":
        return s1
    if s1.kind == s2.kind == "endo" and s1.values == s2.values:
        return s1
    raise ValueError(f"no product between {s1.kind}- and {s2.kind}-valued forms")


def wedge(w1: MixedForm, w2: MixedForm) -> MixedForm:
    """Product with the ``1/(p! q!)`` normalization; values multiply in order."""
    sp = _result_space(w1.space, w2.space)
    k1, k2 = w1.space.kind, w2.space.kind
    acc: dict = {}
    for a, va in w1.comps.items():
        for b, vb in w2.comps.items():
            sign, key = sort_legs(a + b)
            if not sign:
                continue
            _add_into(acc, key, sp.values.product(va, vb, k1, k2), sign)
    return MixedForm(sp, w1.degree + w2.degree, acc)


def graded_bracket(w1: MixedForm, w2: MixedForm) -> MixedForm:
    """Graded bracket: Lie bracket of kernel values, graded commutator of endo values."""
    if w1.space != w2.space or w1.space.kind not in ("kernel", "endo"):
        raise ValueError("graded bracket needs two forms with the same kernel or endo values")
    if w1.space.kind == "endo":
        sign = -1 if (w1.degree * w2.degree) % 2 else 1
        return wedge(w1, w2) - wedge(w2, w1).scale(sign)
    sp = w1.space
    acc: dict = {}
    for a, va in w1.comps.items():
        for b, vb in w2.comps.items():
            sign, key = sort_legs(a + b)
            if not sign:
                continue
            _add_into(acc, key, sp.values.bracket(va, vb), sign)
    return MixedForm(sp, w1.degree + w2.degree, acc)


# -- differential ------------------------------------------------------------------------

def differential(w: MixedForm) -> MixedForm:
    """Total differential ``d + s'`` (de Rham plus Chevalley-Eilenberg with the value action)."""
    sp = w.space
    d = sp.base_dim
    acc: dict = {}
    brackets_into: dict[int, list[tuple[int, int, Fraction]]] = defaultdict(list)
    for i, j, k, c in sp.alg.nonzero_brackets:
        if i < j:
            brackets_into[k].append((i, j, c))
    for key, v in w.comps.items():
        # (d v) ^ e^K
        for leg in range(sp.nlegs):
            if leg in key:
                continue
            dv = sp.leg_action(leg, v)
            if not any(dv):
                continue
            sign, new = sort_legs((leg,) + key)
            _add_into(acc, new, dv, sign)
        # v d(e^K), with d theta^k = - sum_{i<j} c_ij^k theta^i ^ theta^j
        for pos, leg in enumerate(key):
            if leg < d:
                continue
            for i, j, c in brackets_into[leg - d]:
                legs = key[:pos] + (d + i, d + j) + key[pos + 1 :]
                sign, new = sort_legs(legs)
                if not sign:
                    continue
                coef = -c * sign * (-1 if pos % 2 else 1)
                _add_into(acc, new, v, coef)
    return MixedForm(sp, w.degree + 1, acc)


def differential_via_koszul(w: MixedForm, args: Sequence[TlaElement]) -> Value:
    """Value of ``d w`` on ``args`` straight from the Koszul formula."""
    r = w.degree
    if len(args) != r + 1:
        raise ValueError(f"d of a {r}-form takes {r + 1} arguments, got {len(args)}")
    sp = w.space
    total = sp.zero_value()
    for i in range(r + 1):
        rest = list(args[:i]) + list(args[i + 1 :])
        term = sp.act(args[i], evaluate(w, rest))
        sign = 1 if i % 2 == 0 else -1
        total = tuple(t + sign * x for t, x in zip(total, term))
    for i in range(r + 1):
        for j in range(i + 1, r + 1):
            rest = [a for k, a in enumerate(args) if k not in (i, j)]
            term = evaluate(w, [sp.bracket(args[i], args[j])] + rest)
            sign = 1 if (i + j) % 2 == 0 else -1
            total = tuple(t + sign * x for t, x in zip(total, term))
    return total


# -- Cartan calculus -------------------------------------------------------------------------

def interior(x: TlaElement, w: MixedForm) -> MixedForm:
    """``(i_x w)(X_2..X_r) = w(x, X_2..X_r)``; zero on functions."""
    if w.degree == 0:
        return w.space.zero(0)
    coords = x.coords
    acc: dict = {}
    for key, v in w.comps.items():
        for pos, leg in enumerate(key):
            c = coords[leg]
            if not c:
                continue
            new = key[:pos] + key[pos + 1 :]
            val = tuple(c * t for t in v)
            _add_into(acc, new, val, -1 if pos % 2 else 1)
    return MixedForm(w.space, w.degree - 1, acc)


def lie_derivative(x: TlaElement, w: MixedForm) -> MixedForm:
    """``L_x = d i_x + i_x d``."""
    out = interior(x, differential(w))
    if w.degree > 0:
        out = out + differential(interior(x, w))
    return out


@dataclass(frozen=True)
class CartanOperation:
    """Interior products by a family of algebroid elements (closed under bracket up to functions)."""

    space: FormSpace
    generators: tuple[TlaElement, ...]

    def interior(self, x: TlaElement, w: MixedForm) -> MixedForm:
        return interior(x, w)

    def lie(self, x: TlaElement, w: MixedForm) -> MixedForm:
        return lie_derivative(x, w)

    def is_horizontal(self, w: MixedForm) -> bool:
        return all(interior(g, w).is_zero() for g in self.generators)

    def is_invariant(self, w: MixedForm) -> bool:
        return all(lie_derivative(g, w).is_zero() for g in self.generators)

    def is_basic(self, w: MixedForm) -> bool:
        return self.is_horizontal(w) and self.is_invariant(w)


def kernel_operation(space: FormSpace) -> CartanOperation:
    """The Cartan operation of the kernel ``{0 + gamma}``."""
    gens = tuple(space.basis_element(space.base_dim + a) for a in range(space.m))
    return CartanOperation(space, gens)


def is_horizontal(w: MixedForm, op: CartanOperation) -> bool:
    return op.is_horizontal(w)


def is_invariant(w: MixedForm, op: CartanOperation) -> bool:
    return op.is_invariant(w)


def is_basic(w: MixedForm, op: CartanOperation) -> bool:
    return op.is_basic(w)


def cartan_defects(
    space: FormSpace, x: TlaElement, y: TlaElement, f: Poly, w: MixedForm
) -> dict[str, MixedForm]:
    """The four Cartan relations as defect forms (all must vanish)."""
    xy = space.bracket(x, y)
    ix = lambda u: interior(x, u)  # noqa: E731
    iy = lambda u: interior(y, u)  # noqa: E731
    lx = lambda u: lie_derivative(x, u)  # noqa: E731
    ly = lambda u: lie_derivative(y, u)  # noqa: E731
    return {
        "i_fX = f i_X": interior(x.scale(f), w) - ix(w).scale(f),
        "i_X i_Y + i_Y i_X = 0": ix(iy(w)) + iy(ix(w)) if w.degree >= 2 else space.zero(max(w.degree - 2, 0)),
        "[L_X, i_Y] = i_[X,Y]": lx(iy(w)) - iy(lx(w)) - interior(xy, w),
        "[L_X, L_Y] = L_[X,Y]": lx(ly(w)) - ly(lx(w)) - lie_derivative(xy, w),
    }


# -- pullback along leg substitutions --------------------------------------------------------

def substitute_legs(
    w: MixedForm,
    target: FormSpace,
    leg_images: Sequence[Mapping[int, Poly]],
    coeff_map: Callable[[Poly], Poly],
    value_map: Callable[[Value], Value] | None = None,
) -> MixedForm:
    """Replace each source leg ``e^k`` by the scalar 1-form ``sum_l leg_images[k][l] e^l`` of ``target``.

    Coefficients are carried into the target ring by ``coeff_map`` and values
    transformed by ``value_map`` afterwards.
    """
    acc: dict = {}
    for key, v in w.comps.items():
        v2 = tuple(coeff_map(x) for x in v)
        partial: dict[tuple[int, ...], Poly] = {(): Poly.const(1, target.nvars)}
        for leg in key:
            nxt: dict[tuple[int, ...], Poly] = {}
            for legs, coef in partial.items():
                for l2, c2 in leg_images[leg].items():
                    if l2 in legs or not c2:
                        continue
                    new = legs + (l2,)
                    t = coef * c2
                    prev = nxt.get(new)
                    nxt[new] = t if prev is None else prev + t
            partial = nxt
        for legs, coef in partial.items():
            if not coef:
                continue
            sign, sk = sort_legs(legs)
            _add_into(acc, sk, tuple(coef * x for x in v2), sign)
    out = MixedForm(target, w.degree, acc)
    if value_map is not None:
        out = out.map_values(value_map)
    return out
