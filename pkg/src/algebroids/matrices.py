"""Square matrices with polynomial (or rational) entries, stored row-major.

A matrix of size ``n`` is a flat tuple of ``n*n`` entries.  Entries are
:class:`~algebroids.poly.Poly` for fields over the base and ``Fraction`` for
constant matrices (Lie algebra bases, representations).
"""

from __future__ import annotations

from fractions import Fraction
from itertools import permutations
from math import isqrt
from typing import Sequence

from .poly import Poly, apply_field


def size_of(a: Sequence) -> int:
    n = isqrt(len(a))
    if n * n != len(a):
        raise ValueError(f"flat matrix of length {len(a)} is not square")
    return n


def const_matrix(a: Sequence[Fraction], nvars: int) -> tuple[Poly, ...]:
    return tuple(Poly.const(x, nvars) for x in a)


def identity(n: int, nvars: int) -> tuple[Poly, ...]:
    one, zero = Poly.const(1, nvars), Poly.zero(nvars)
    return tuple(one if i == j else zero for i in range(n) for j in range(n))


def elementary(i: int, j: int, n: int) -> tuple[Fraction, ...]:
    """Constant matrix unit ``E_ij`` (0-based indices)."""
    return tuple(Fraction(1 if (r, c) == (i, j) else 0) for r in range(n) for c in range(n))


def mat_mul(a: Sequence, b: Sequence, n: int | None = None) -> tuple:
    n = n or size_of(a)
    zero = a[0] * 0 + b[0] * 0
    out = []
    for i in range(n):
        row = a[i * n : (i + 1) * n]
        for j in range(n):
            acc = None
            for k in range(n):
                x, y = row[k], b[k * n + j]
                if not x or not y:
                    continue
                t = x * y
                acc = t if acc is None else acc + t
            out.append(zero if acc is None else acc)
    return tuple(out)


def mat_add(a: Sequence, b: Sequence) -> tuple:
    return tuple(x + y for x, y in zip(a, b))


def mat_sub(a: Sequence, b: Sequence) -> tuple:
    return tuple(x - y for x, y in zip(a, b))


def mat_neg(a: Sequence) -> tuple:
    return tuple(-x for x in a)


def mat_scale(c, a: Sequence) -> tuple:
    return tuple(c * x for x in a)


def commutator(a: Sequence, b: Sequence) -> tuple:
    n = size_of(a)
    return mat_sub(mat_mul(a, b, n), mat_mul(b, a, n))


def trace(a: Sequence):
    n = size_of(a)
    acc = a[0]
    for i in range(1, n):
        acc = acc + a[i * n + i]
    return acc


def _perm_sign(p: Sequence[int]) -> int:
    sign, seen = 1, list(p)
    for i in range(len(seen)):
        while seen[i] != i:
            j = seen[i]
            seen[i], seen[j] = seen[j], seen[i]
            sign = -sign
    return sign


def det(a: Sequence):
    """Leibniz determinant; fine for the n <= 4 matrices used here."""
    n = size_of(a)
    total = None
    for p in permutations(range(n)):
        term = None
        for i in range(n):
            x = a[i * n + p[i]]
            term = x if term is None else term * x
        term = term * _perm_sign(p)
        total = term if total is None else total + term
    return total


def apply_field_matrix(field: Sequence[Poly], a: Sequence[Poly]) -> tuple[Poly, ...]:
    """Entrywise action ``X.a`` of a vector field."""
    return tuple(apply_field(field, x) for x in a)


def is_zero_matrix(a: Sequence) -> bool:
    return not any(a)


def transpose(a: Sequence) -> tuple:
    n = size_of(a)
    return tuple(a[j * n + i] for i in range(n) for j in range(n))


# -- exact linear algebra over the rationals --------------------------------

def rref(rows: Sequence[Sequence[Fraction]]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form and pivot columns."""
    m = [[Fraction(x) for x in r] for r in rows]
    pivots: list[int] = []
    if not m:
        return m, pivots
    ncols = len(m[0])
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m, pivots


def rank(rows: Sequence[Sequence[Fraction]]) -> int:
    return len(rref(rows)[1])


def invert(a: Sequence[Sequence[Fraction]]) -> list[list[Fraction]]:
    n = len(a)
    aug = [list(map(Fraction, row)) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(a)]
    red, piv = rref(aug)
    if piv[:n] != list(range(n)):
        raise ValueError("matrix is singular")
    return [row[n:] for row in red]
