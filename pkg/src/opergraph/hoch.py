"""Hochschild cochains of a finite-dimensional algebra.

An algebra is given by structure constants ``c[i, j, k]`` with
``e_i e_j = sum_k c[i, j, k] e_k``.  An ``n``-cochain is an object array of
``Fraction`` with shape ``(dim,) * n + (dim,)``; the output index is last.

Sign conventions
----------------
The differential is

    (df)(a_1..a_{n+1}) = a_1 f(a_2..) + sum_i (-1)^i f(.., a_i a_{i+1}, ..) - (-1)^n f(a_1..a_n) a_{n+1}.

The bracket is built from the pre-Lie composition

    f o g = sum_{i=0}^{m-1} (-1)^(i(n-1)) f(a_1..a_i, g(a_{i+1}..a_{i+n}), ..)

as ``[f, g] = (-1)^(m-1)(n-1) g o f - f o g``.  With this overall sign
``df = [f, m0]`` holds for every cochain, and ``[m, m] = 2 (m(a, m(b, c)) -
m(m(a, b), c))``; the bracket is graded antisymmetric and satisfies the
graded Jacobi identity for the shifted degree ``n - 1``.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

import numpy as np

from .errors import BudgetError
from .exactla import ChainComplex, RationalMatrix, betti_numbers

MAX_DIM = 4
MAX_TENSOR_ENTRIES = 4 ** 6


def as_fraction_array(a) -> np.ndarray:
    arr = np.asarray(a, dtype=object)
    out = np.empty(arr.shape, dtype=object)
    for idx in np.ndindex(*arr.shape):
        out[idx] = Fraction(arr[idx])
    return out


def zero_cochain(dim: int, n: int) -> np.ndarray:
    return as_fraction_array(np.zeros((dim,) * (n + 1), dtype=int))


@dataclass
class AlgebraTable:
    dim: int
    c: np.ndarray
    unit: list | None = None

    def __post_init__(self):
        self.c = as_fraction_array(self.c)
        if self.c.shape != (self.dim,) * 3:
            raise ValueError(f"structure constants must have shape {(self.dim,) * 3}")
        if self.unit is not None:
            self.unit = [Fraction(x) for x in self.unit]

    @property
    def product(self) -> np.ndarray:
        """The multiplication as a 2-cochain."""
        return self.c

    def mul(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        return np.tensordot(y, np.tensordot(x, self.c, axes=([0], [0])), axes=([0], [0]))

    def check_unit(self) -> bool:
        if self.unit is None:
            return True
        u = np.array(self.unit, dtype=object)
        for i in range(self.dim):
            e = np.array([Fraction(int(i == j)) for j in range(self.dim)], dtype=object)
            if any(self.mul(u, e) != e) or any(self.mul(e, u) != e):
                return False
        return True

    @classmethod
    def from_json(cls, data) -> AlgebraTable:
        if isinstance(data, (str, Path)):
            data = json.loads(Path(data).read_text())
        dim = int(data["dim"])
        c = np.zeros((dim,) * 3, dtype=object)
        c[...] = Fraction(0)
        for i, j, k, num, den in data["c"]:
            c[i, j, k] += Fraction(num, den)
        unit = data.get("unit")
        return cls(dim, c, unit)

    def to_json(self) -> dict:
        entries = []
        for idx in np.ndindex(*self.c.shape):
            v = self.c[idx]
            if v:
                entries.append([*map(int, idx), v.numerator, v.denominator])
        out = {"dim": self.dim, "c": entries}
        if self.unit is not None:
            out["unit"] = [str(x) for x in self.unit]
        return out


def verify_associative(A: AlgebraTable) -> bool:
    c = A.c
    left = np.tensordot(c, c, axes=([2], [0]))  # (e_i e_j) e_k -> [i, j, k, out]
    right = np.tensordot(c, c, axes=([2], [1]))  # e_i (e_j e_k) -> [j, k, i, out]
    right = np.moveaxis(right, 2, 0)
    return bool(np.all(left == right))


def _sign(k: int) -> int:
    return -1 if k % 2 else 1


def arity_of(f: np.ndarray) -> int:
    return f.ndim - 1


def _check_budget(dim: int, n: int) -> None:
    if dim > MAX_DIM or dim ** (n + 1) > MAX_TENSOR_ENTRIES:
        raise BudgetError(f"cochains of arity {n} over a {dim}-dimensional algebra exceed the budget")


def hochschild_differential(A: AlgebraTable, f: np.ndarray) -> np.ndarray:
    """``df`` for an ``n``-cochain ``f``; an ``(n+1)``-cochain."""
    n = arity_of(f)
    _check_budget(A.dim, n + 1)
    c = A.c
    # a_1 f(a_2..a_{n+1}): sum_x c[a1, x, out] f[a2.., x]
    first = np.tensordot(c, f, axes=([1], [n]))  # [a1, out, a2..a_{n+1}]
    first = np.moveaxis(first, 1, n + 1)
    out = first
    for i in range(1, n + 1):
        # f(.., a_i a_{i+1}, ..): sum_x c[a_i, a_{i+1}, x] f[.., x, ..]
        t = np.tensordot(f, c, axes=([i - 1], [2]))  # [f axes without i-1..., a_i, a_{i+1}]
        # move the two new axes into position i-1, i
        t = np.moveaxis(t, [n, n + 1], [i - 1, i])
        out = out + _sign(i) * t
    # f(a_1..a_n) a_{n+1}: sum_x f[a1..an, x] c[x, a_{n+1}, out]
    last = np.tensordot(f, c, axes=([n], [0]))
    out = out - _sign(n) * last
    return out


def _insert(f: np.ndarray, g: np.ndarray, i: int) -> np.ndarray:
    """``f(a_1..a_i, g(a_{i+1}..a_{i+n}), a_{i+n+1}..)`` as a tensor."""
    m, n = arity_of(f), arity_of(g)
    t = np.tensordot(g, f, axes=([n], [i]))  # [g inputs (n), f inputs except i (m-1), out]
    # reorder: f inputs before i, g inputs, remaining f inputs, out
    order = list(range(n, n + i)) + list(range(n)) + list(range(n + i, n + m - 1)) + [n + m - 1]
    return np.transpose(t, order)


def pre_lie(f: np.ndarray, g: np.ndarray) -> np.ndarray:
    """``f o g``; zero when ``f`` is a 0-cochain."""
    m, n = arity_of(f), arity_of(g)
    out = zero_cochain(f.shape[-1], m + n - 1)
    for i in range(m):
        out = out + _sign(i * (n - 1)) * _insert(f, g, i)
    return out


def gerstenhaber_bracket(f: np.ndarray, g: np.ndarray) -> np.ndarray:
    """The bracket of an ``m``-cochain and an ``n``-cochain, arity ``m + n - 1``."""
    m, n = arity_of(f), arity_of(g)
    if m + n - 1 < 0:
        raise ValueError("bracket of two 0-cochains is undefined")
    _check_budget(f.shape[-1], m + n - 1)
    return _sign((m - 1) * (n - 1)) * pre_lie(g, f) - pre_lie(f, g)


def hochschild_matrix(A: AlgebraTable, n: int) -> RationalMatrix:
    """Matrix of ``d: C^n -> C^{n+1}`` in the tensor-entry bases."""
    _check_budget(A.dim, n + 1)
    dim = A.dim
    size = dim ** (n + 1)
    cols = []
    for j in range(size):
        f = zero_cochain(dim, n)
        f.flat[j] = Fraction(1)
        df = hochschild_differential(A, f)
        cols.append({i: v for i, v in enumerate(df.flat) if v})
    return RationalMatrix.from_columns(dim ** (n + 2), cols)


def hochschild_complex(A: AlgebraTable, nmax: int) -> ChainComplex:
    """Truncated cochain complex ``C^0 -> ... -> C^nmax`` in chain degrees ``-n``."""
    dims = {-n: A.dim ** (n + 1) for n in range(nmax + 1)}
    diffs = {-n: hochschild_matrix(A, n) for n in range(nmax)}
    return ChainComplex(dims, diffs)


def hochschild_cohomology(A: AlgebraTable, nmax: int) -> dict[int, int]:
    """``dim H^n(A, A)`` for ``0 <= n < nmax``."""
    if nmax < 1:
        raise ValueError("nmax must be at least 1")
    _check_budget(A.dim, nmax)
    betti = betti_numbers(hochschild_complex(A, nmax))
    return {n: betti[-n] for n in range(nmax)}


# deformations --------------------------------------------------------------

@dataclass
class DeformationSeries:
    """Truncated multiplication ``m_t = sum_k terms[k] t^k``; ``terms[0]`` is the algebra product."""

    terms: list

    def __post_init__(self):
        self.terms = [as_fraction_array(t) for t in self.terms]
        for t in self.terms:
            if arity_of(t) != 2:
                raise ValueError("deformation terms must be 2-cochains")

    @property
    def order(self) -> int:
        return len(self.terms) - 1

    @classmethod
    def from_json(cls, data) -> DeformationSeries:
        if isinstance(data, (str, Path)):
            data = json.loads(Path(data).read_text())
        dim = int(data["dim"])
        terms = []
        for entries in data["terms"]:
            t = zero_cochain(dim, 2)
            for i, j, k, num, den in entries:
                t[i, j, k] += Fraction(num, den)
            terms.append(t)
        return cls(terms)


def deformation_residuals(D: DeformationSeries) -> list[np.ndarray]:
    """Coefficients of ``t^k`` in ``1/2 [m_t, m_t]`` for ``k = 0..N``."""
    N = D.order
    out = []
    for k in range(N + 1):
        acc = zero_cochain(D.terms[0].shape[0], 3)
        for i in range(k + 1):
            acc = acc + gerstenhaber_bracket(D.terms[i], D.terms[k - i])
        out.append(acc * Fraction(1, 2))
    return out


def associator_expansion(D: DeformationSeries) -> list[np.ndarray]:
    """Coefficients of ``t^k`` in ``m_t(m_t(a,b),c) - m_t(a,m_t(b,c))``, expanded directly."""
    N = D.order
    dim = D.terms[0].shape[0]
    out = []
    for k in range(N + 1):
        acc = zero_cochain(dim, 3)
        for i in range(k + 1):
            p, q = D.terms[i], D.terms[k - i]
            for a, b, c in itertools.product(range(dim), repeat=3):
                for x in range(dim):
                    if q[a, b, x]:
                        acc[a, b, c, :] += q[a, b, x] * p[x, c, :]
                    if q[b, c, x]:
                        acc[a, b, c, :] -= q[b, c, x] * p[a, x, :]
        out.append(acc)
    return out


def is_zero(t: np.ndarray) -> bool:
    return not any(v for v in t.flat)


def cochain_to_json(t: np.ndarray) -> list:
    return [[*map(int, idx), v.numerator, v.denominator] for idx, v in np.ndenumerate(t) if v]
