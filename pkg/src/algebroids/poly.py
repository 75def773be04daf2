"""Exact multivariate polynomials over the rationals.

A :class:`Poly` is the desk-scale stand-in for a smooth function on the base:
a finite map from exponent multi-indices to :class:`fractions.Fraction`
coefficients.  Zero coefficients are never stored.

Vector fields are plain tuples of polynomials (one coefficient per
coordinate derivation); see :func:`apply_field` and :func:`field_bracket`.
"""

from __future__ import annotations

import contextlib
import contextvars
import re
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence, Union

Number = Union[int, Fraction]

DEFAULT_DEGREE_CAP = 6

_degree_cap: contextvars.ContextVar[int | None] = contextvars.ContextVar(
    "degree_cap", default=DEFAULT_DEGREE_CAP
)


class DegreeCapError(ArithmeticError):
    """A product would exceed the configured polynomial degree cap."""


def get_degree_cap() -> int | None:
    return _degree_cap.get()


def set_degree_cap(cap: int | None) -> None:
    """Set the cap for the current context. ``None`` disables it."""
    if cap is not None and cap < 0:
        raise ValueError("degree cap must be non-negative")
    _degree_cap.set(cap)


@contextlib.contextmanager
def degree_cap(cap: int | None) -> Iterator[None]:
    token = _degree_cap.set(cap)
    try:
        yield
    finally:
        _degree_cap.reset(token)


def to_fraction(value: Number | str) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, (int, str)):
        return Fraction(value)
    raise TypeError(f"cannot convert {type(value).__name__} to an exact rational")


def format_fraction(value: Fraction) -> str:
    """Serialize as ``"p/q"`` (always with a denominator)."""
    return f"{value.numerator}/{value.denominator}"


class Poly:
    """Immutable polynomial in ``nvars`` variables with rational coefficients."""

    __slots__ = ("nvars", "terms", "_hash")

    def __init__(self, terms: Mapping[tuple[int, ...], Number] | None = None, nvars: int = 0):
        clean: dict[tuple[int, ...], Fraction] = {}
        if terms:
            for exp, c in terms.items():
                if len(exp) != nvars:
                    raise ValueError(f"exponent {exp} does not have length {nvars}")
                if any(e < 0 for e in exp):
                    raise ValueError(f"negative exponent in {exp}")
                c = to_fraction(c)
                if c:
                    clean[tuple(exp)] = c
        self.nvars = nvars
        self.terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict[tuple[int, ...], Fraction], nvars: int) -> Poly:
        p = object.__new__(cls)
        p.nvars = nvars
        p.terms = terms
        p._hash = None
        return p

    @classmethod
    def zero(cls, nvars: int) -> Poly:
        return cls._raw({}, nvars)

    @classmethod
    def const(cls, value: Number, nvars: int) -> Poly:
        value = to_fraction(value)
        return cls._raw({(0,) * nvars: value} if value else {}, nvars)

    @classmethod
    def var(cls, index: int, nvars: int) -> Poly:
        if not 0 <= index < nvars:
            raise IndexError(f"variable index {index} out of range for {nvars} variables")
        exp = [0] * nvars
        exp[index] = 1
        return cls._raw({tuple(exp): Fraction(1)}, nvars)

    # -- basic queries -------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    @property
    def degree(self) -> int:
        """Total degree; ``-1`` for the zero polynomial."""
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_term(self) -> Fraction:
        return self.terms.get((0,) * self.nvars, Fraction(0))

    # -- arithmetic ----------------------------------------------------

    def _coerce(self, other: object) -> Poly | None:
        if isinstance(other, Poly):
            if other.nvars != self.nvars:
                raise ValueError(f"polynomial rings differ: {self.nvars} vs {other.nvars} variables")
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return Poly.const(other, self.nvars)
        return None

    def __add__(self, other: object) -> Poly:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if not o.terms:
            return self
        if not self.terms:
            return o
        out = dict(self.terms)
        for e, c in o.terms.items():
            s = out.get(e, 0) + c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return Poly._raw(out, self.nvars)

    __radd__ = __add__

    def __neg__(self) -> Poly:
        return Poly._raw({e: -c for e, c in self.terms.items()}, self.nvars)

    def __sub__(self, other: object) -> Poly:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other: object) -> Poly:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other: object) -> Poly:
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            if not other:
                return Poly._raw({}, self.nvars)
            return Poly._raw({e: c * other for e, c in self.terms.items()}, self.nvars)
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if not self.terms or not o.terms:
            return Poly._raw({}, self.nvars)
        cap = _degree_cap.get()
        if cap is not None and self.degree + o.degree > cap:
            raise DegreeCapError(
                f"product of degrees {self.degree} and {o.degree} exceeds degree cap {cap}"
            )
        out: dict[tuple[int, ...], Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in o.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = out.get(e, 0) + c1 * c2
                if s:
                    out[e] = s
                else:
                    del out[e]
        return Poly._raw(out, self.nvars)

    __rmul__ = __mul__

    def __truediv__(self, other: Number) -> Poly:
        other = to_fraction(other)
        return Poly._raw({e: c / other for e, c in self.terms.items()}, self.nvars)

    def __pow__(self, k: int) -> Poly:
        if k < 0:
            raise ValueError("negative powers are not polynomials")
        out = Poly.const(1, self.nvars)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Poly):
            return self.nvars == other.nvars and self.terms == other.terms
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.terms == Poly.const(other, self.nvars).terms
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self.terms.items())))
        return self._hash

    # -- calculus and substitution ---------------------------------------

    def diff(self, index: int) -> Poly:
        out: dict[tuple[int, ...], Fraction] = {}
        for e, c in self.terms.items():
            k = e[index]
            if k:
                ne = e[:index] + (k - 1,) + e[index + 1 :]
                out[ne] = c * k
        return Poly._raw(out, self.nvars)

    def subs(self, values: Sequence[Poly], nvars: int | None = None) -> Poly:
        """Compose: replace variable ``i`` by ``values[i]`` (all in one ring)."""
        if len(values) != self.nvars:
            raise ValueError("need one substitution per variable")
        if nvars is None:
            if not values:
                raise ValueError("target ring size required for zero-variable substitution")
            nvars = values[0].nvars
        powers: dict[tuple[int, int], Poly] = {}

        def power(i: int, k: int) -> Poly:
            key = (i, k)
            if key not in powers:
                powers[key] = Poly.const(1, nvars) if k == 0 else power(i, k - 1) * values[i]
            return powers[key]

        total = Poly.zero(nvars)
        for e, c in self.terms.items():
            term = Poly.const(c, nvars)
            for i, k in enumerate(e):
                if k:
                    term = term * power(i, k)
            total = total + term
        return total

    def evaluate(self, point: Sequence[Number]) -> Fraction:
        total = Fraction(0)
        for e, c in self.terms.items():
            t = c
            for x, k in zip(point, e):
                if k:
                    t *= to_fraction(x) ** k
            total += t
        return total

    def embed(self, nvars: int, offset: int = 0) -> Poly:
        """View this polynomial in a larger ring, its variables starting at ``offset``."""
        if offset + self.nvars > nvars:
            raise ValueError("target ring too small")
        pad_l = (0,) * offset
        pad_r = (0,) * (nvars - offset - self.nvars)
        return Poly._raw({pad_l + e + pad_r: c for e, c in self.terms.items()}, nvars)

    def restrict(self, keep: int) -> Poly:
        """Set variables ``keep..nvars-1`` to zero and drop them from the ring."""
        out = {}
        for e, c in self.terms.items():
            if not any(e[keep:]):
                out[e[:keep]] = c
        return Poly._raw(out, keep)

    # -- text form -------------------------------------------------------

    def __str__(self) -> str:
        return format_poly(self)

    def __repr__(self) -> str:
        return f"Poly({format_poly(self)!r}, nvars={self.nvars})"


def zeros(n: int, nvars: int) -> tuple[Poly, ...]:
    z = Poly.zero(nvars)
    return (z,) * n


def as_poly(value: Poly | Number, nvars: int) -> Poly:
    if isinstance(value, Poly):
        if value.nvars != nvars:
            raise ValueError(f"expected a polynomial in {nvars} variables")
        return value
    return Poly.const(value, nvars)


# -- vector fields --------------------------------------------------------

def apply_field(field: Sequence[Poly], f: Poly) -> Poly:
    """Action ``X.f = sum_mu X^mu d_mu f`` of a polynomial vector field."""
    if len(field) != f.nvars:
        raise ValueError("vector field and function live on different bases")
    total = Poly.zero(f.nvars)
    for mu, xm in enumerate(field):
        if xm:
            df = f.diff(mu)
            if df:
                total = total + xm * df
    return total


def field_bracket(x: Sequence[Poly], y: Sequence[Poly]) -> tuple[Poly, ...]:
    return tuple(apply_field(x, yc) - apply_field(y, xc) for xc, yc in zip(x, y))


# -- text form ------------------------------------------------------------

def _monomial(exp: tuple[int, ...]) -> str:
    parts = []
    for i, k in enumerate(exp):
        if k == 1:
            parts.append(f"x{i + 1}")
        elif k > 1:
            parts.append(f"x{i + 1}^{k}")
    return "*".join(parts)


def format_poly(p: Poly) -> str:
    """Deterministic text, e.g. ``"3/2*x1^2*x2 - 1/1"``; zero prints as ``"0"``."""
    if not p.terms:
        return "0"
    out = []
    for exp in sorted(p.terms, key=lambda e: (-sum(e), tuple(-k for k in e))):
        c = p.terms[exp]
        sign = "-" if c < 0 else "+"
        mono = _monomial(exp)
        coeff = format_fraction(abs(c))
        body = f"{coeff}*{mono}" if mono else coeff
        out.append((sign, body))
    first_sign, first = out[0]
    text = ("-" if first_sign == "-" else "") + first
    for sign, body in out[1:]:
        text += f" {sign} {body}"
    return text


_TERM_RE = re.compile(r"\s*([+-]?)\s*([^+-]+)")
_FACTOR_RE = re.compile(r"^(?:x(\d+)(?:\^(\d+))?|(\d+(?:/\d+)?))$")


def parse_poly(text: str | Number, nvars: int) -> Poly:
    """Parse ``"x1*x2 - 3/2*x1^2 + 1"`` style text into a :class:`Poly`."""
    if isinstance(text, (int, Fraction)):
        return Poly.const(text, nvars)
    s = str(text).strip()
    if not s:
        raise ValueError("empty polynomial text")
    total = Poly.zero(nvars)
    pos = 0
    # keep '/' inside rationals from splitting; '+'/'-' are term separators
    for m in _TERM_RE.finditer(s):
        if m.start() != pos and s[pos:m.start()].strip():
            raise ValueError(f"cannot parse polynomial {text!r}")
        pos = m.end()
        sign = -1 if m.group(1) == "-" else 1
        term = Poly.const(sign, nvars)
        for factor in m.group(2).split("*"):
            factor = factor.strip()
            fm = _FACTOR_RE.match(factor)
            if not fm:
                raise ValueError(f"bad factor {factor!r} in {text!r}")
            if fm.group(1):
                idx = int(fm.group(1)) - 1
                power = int(fm.group(2) or 1)
                if not 0 <= idx < nvars:
                    raise ValueError(f"variable x{idx + 1} out of range for {nvars} variables")
                term = term * Poly.var(idx, nvars) ** power
            else:
                term = term * Fraction(fm.group(3))
        total = total + term
    if s[pos:].strip():
        raise ValueError(f"cannot parse polynomial {text!r}")
    return total


def poly_sum(items: Iterable[Poly], nvars: int) -> Poly:
    total = Poly.zero(nvars)
    for p in items:
        total = total + p
    return total
