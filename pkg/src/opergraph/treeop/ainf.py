"""The A-infinity operad complex and A-infinity algebra structures on small complexes."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from ..errors import BudgetError
from ..exactla import ChainComplex, RationalMatrix
from .trees import degree, enumerate_planar_trees, tree_differential

MAX_AINF_ARITY = 9


def ainf_basis(n: int) -> dict[int, list]:
    """Basis trees of A-infinity(n) for the standard leaf order, keyed by ``|T|``."""
    by_deg: dict[int, list] = {}
    for t in enumerate_planar_trees(n, 2):
        by_deg.setdefault(degree(t), []).append(t)
    return by_deg


def ainf_component(n: int) -> ChainComplex:
    """A-infinity(n) for one leaf order as a chain complex.

    The tree differential raises ``|T|``; it is stored in chain degree
    ``k = -|T|`` so that it lowers ``k`` by one.  Chain degree 0 holds the
    binary trees.
    """
    if n < 1:
        raise ValueError("A-infinity has no arity-0 component")
    if n > MAX_AINF_ARITY:
        raise BudgetError(f"arity {n} exceeds the supported bound {MAX_AINF_ARITY}")
    basis = ainf_basis(n)
    index = {k: {t: j for j, t in enumerate(ts)} for k, ts in basis.items()}
    dims = {-k: len(ts) for k, ts in basis.items()}
    diffs = {}
    for k, ts in basis.items():
        if k + 1 not in basis:
            continue
        target = index[k + 1]
        cols = []
        for t in ts:
            cols.append({target[s]: c for s, c in tree_differential(t).items()})
        diffs[-k] = RationalMatrix.from_columns(len(target), cols)
    return ChainComplex(dims, diffs)


def ainf_dims_by_degree(n: int) -> list[int]:
    """Dimensions of A-infinity(n) for ``|T| = 2-n, ..., 0``."""
    basis = ainf_basis(n)
    return [len(basis.get(k, ())) for k in range(min(basis), 1)]


# A-infinity algebras ------------------------------------------------------

class DegreeError(ValueError):
    pass


@dataclass
class EndOpsTable:
    """A finite-dimensional graded complex with products ``M_n``.

    ``degrees[a]`` is the degree of basis vector ``a``; ``d[b, a]`` is the
    coefficient of ``e_b`` in ``d e_a``; ``products[n]`` has shape
    ``(dim,) * n + (dim,)`` with the output index last.
    """

    degrees: list[int]
    d: np.ndarray
    products: dict[int, np.ndarray] = field(default_factory=dict)

    def __post_init__(self):
        dim = len(self.degrees)
        self.d = _fractions(self.d, (dim, dim))
        self.products = {n: _fractions(m, (dim,) * (n + 1)) for n, m in self.products.items()}

    @property
    def dim(self) -> int:
        return len(self.degrees)

    def validate(self) -> None:
        dim = self.dim
        for b, a in itertools.product(range(dim), repeat=2):
            if self.d[b, a] and self.degrees[b] != self.degrees[a] + 1:
                raise DegreeError(f"d(e{a}) has a component of the wrong degree")
        if any(v for v in (_matmul(self.d, self.d)).flat):
            raise ValueError("d o d is nonzero")
        for n, m in self.products.items():
            if n < 2:
                raise ValueError("products start at arity 2")
            for idx in itertools.product(range(dim), repeat=n + 1):
                if m[idx] and self.degrees[idx[-1]] != sum(self.degrees[a] for a in idx[:-1]) + 2 - n:
                    raise DegreeError(f"M{n} is not homogeneous of degree {2 - n} at {idx}")

    def product(self, n: int) -> np.ndarray:
        m = self.products.get(n)
        if m is None:
            return _fractions(np.zeros((self.dim,) * (n + 1), dtype=int), (self.dim,) * (n + 1))
        return m


def _fractions(a, shape) -> np.ndarray:
    arr = np.asarray(a, dtype=object)
    if arr.shape != shape:
        raise ValueError(f"expected shape {shape}, got {arr.shape}")
    out = np.empty(shape, dtype=object)
    for idx in np.ndindex(*shape):
        out[idx] = Fraction(arr[idx])
    return out


def _matmul(a, b):
    return np.tensordot(a, b, axes=([1], [0]))


def _sign(k: int) -> int:
    """``(-1)^k`` as an int, also for negative ``k``."""
    return -1 if k % 2 else 1


def _apply_d(d: np.ndarray, v: np.ndarray) -> np.ndarray:
    return d.dot(v)


def check_ainf_relations(E: EndOpsTable, nmax: int) -> dict[int, np.ndarray]:
    """Residual tensors of the A-infinity relations for arities ``2..nmax``.

    For basis inputs ``v_1..v_n`` the residual is

        d M_n(v) - (-1)^n sum_i eps(i) M_n(.., d v_i, ..)
          - sum_{k+l=n+1} sum_{i<k} (-1)^(i + l(n-i-l)) sigma(i) M_k(.., M_l(v_{i+1}..v_{i+l}), ..)

    with ``eps(i) = (-1)^(|v_1|+...+|v_{i-1}|)`` and
    ``sigma(i) = (-1)^((2-l)(|v_1|+...+|v_i|))``.  All residuals vanish iff
    the table is an A-infinity algebra up to arity ``nmax``.
    """
    E.validate()
    dim = E.dim
    deg = E.degrees
    basis = [np.array([Fraction(int(a == b)) for b in range(dim)], dtype=object) for a in range(dim)]

    def evaluate(n: int, vecs: list[np.ndarray]) -> np.ndarray:
        # multilinear evaluation of M_n on arbitrary vectors
        out = E.product(n)
        for v in vecs:
            out = np.tensordot(v, out, axes=([0], [0]))
        return out

    residuals = {}
    for n in range(2, nmax + 1):
        res = np.empty((dim,) * (n + 1), dtype=object)
        for idx in itertools.product(range(dim), repeat=n):
            vs = [basis[a] for a in idx]
            degs = [deg[a] for a in idx]
            lhs = _apply_d(E.d, evaluate(n, vs))
            for i in range(n):
                eps = _sign(sum(degs[:i]))
                dv = _apply_d(E.d, vs[i])
                term = evaluate(n, vs[:i] + [dv] + vs[i + 1:])
                lhs = lhs - _sign(n) * eps * term
            rhs = np.array([Fraction(0)] * dim, dtype=object)
            for l in range(2, n):
                k = n + 1 - l
                for i in range(k):
                    sign = _sign(i + l * (n - i - l))
                    sigma = _sign((2 - l) * sum(degs[:i]))
                    inner = evaluate(l, vs[i:i + l])
                    rhs = rhs + sign * sigma * evaluate(k, vs[:i] + [inner] + vs[i + l:])
            diff = lhs - rhs
            for b in range(dim):
                res[idx + (b,)] = diff[b]
        residuals[n] = res
    return residuals


def is_ainf_algebra(E: EndOpsTable, nmax: int) -> bool:
    return all(not any(v for v in r.flat) for r in check_ainf_relations(E, nmax).values())


__all__ = [
    "EndOpsTable",
    "DegreeError",
    "ainf_basis",
    "ainf_component",
    "ainf_dims_by_degree",
    "check_ainf_relations",
    "is_ainf_algebra",
]
