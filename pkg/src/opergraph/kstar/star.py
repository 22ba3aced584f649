"""Truncated star products and their associativity residuals.

Normalisation: ``f * g = sum_n t^n / n! * sum_G W_G B_G(f, g)`` summed over
labeled graphs, with ``W_G`` the bare integral over ``(2 pi)^(2n)`` (see
``weights``).  This places the single ``1/n!`` in the series; it gives
``p_1 = {f, g}`` and reproduces the Moyal product for constant ``alpha``.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial

from .graphs import (
    AdmissibleGraph,
    PolyPoisson,
    bidifferential_operator,
    canonical_graph,
    enumerate_admissible_graphs,
)
from .poly import Poly
from .weights import graph_weight

log = logging.getLogger(__name__)

MAX_MC_ORDER = 2


class MissingWeightError(KeyError):
    def __str__(self):
        return f"no weight for contributing graph {self.args[0]!r}"


class ExactWeights:
    """Weights from a rational table keyed by graph code.

    A graph missing from the table is looked up through its canonical
    representative (vertex relabeling and per-vertex edge swaps).
    """

    exact = True

    def __init__(self, table: dict):
        self.table = {AdmissibleGraph.from_code(c).code: Fraction(w) for c, w in table.items()}
        self._canon = {}
        for code, w in self.table.items():
            sign, H = canonical_graph(AdmissibleGraph.from_code(code))
            self._canon.setdefault(H.code, sign * w)

    def weight(self, G: AdmissibleGraph) -> tuple[Fraction, Fraction]:
        if G.n == 0:
            return Fraction(1), Fraction(0)
        w = self.table.get(G.code)
        if w is None:
            sign, H = canonical_graph(G)
            w = self._canon.get(H.code)
            if w is None:
                raise MissingWeightError(G.code)
            w = sign * w
        return w, Fraction(0)


class MonteCarloWeights:
    """Weights estimated on demand; one estimate per canonical graph."""

    exact = False

    def __init__(self, samples: int, seed: int, workers: int | None = None):
        self.samples = samples
        self.seed = seed
        self.workers = workers
        self.estimates: dict = {}

    def weight(self, G: AdmissibleGraph) -> tuple[float, float]:
        if G.n == 0:
            return 1.0, 0.0
        sign, H = canonical_graph(G)
        est = self.estimates.get(H.code)
        if est is None:
            est = graph_weight(H, self.samples, self.seed, self.workers)
            self.estimates[H.code] = est
        return sign * est.mean, est.std_error


@dataclass
class StarSeries:
    """``sum_k coefficients[k] t^k``; ``errors[k]`` bounds each coefficient when weights are estimated."""

    coefficients: list
    errors: list | None = None
    poisson_ok: bool = True
    weight_mode: str = "exact"
    estimates: dict = field(default_factory=dict)

    @property
    def order(self) -> int:
        return len(self.coefficients) - 1

    def is_zero(self) -> bool:
        return all(not p for p in self.coefficients)

    def within(self, factor: float) -> bool:
        """Every coefficient is bounded by ``factor`` times its error bound."""
        errs = self.errors or [Poly.zero(p.nvars) for p in self.coefficients]
        for p, e in zip(self.coefficients, errs):
            for mon, c in p.terms.items():
                if abs(c) > factor * e.coefficient(mon):
                    return False
        return True

    def to_json(self) -> dict:
        out = {
            "weight_mode": self.weight_mode,
            "poisson_ok": self.poisson_ok,
            "coefficients": [p.to_json() for p in self.coefficients],
        }
        if self.errors is not None:
            out["errors"] = [e.to_json() for e in self.errors]
        if self.estimates:
            out["weights"] = {code: est.to_json() for code, est in sorted(self.estimates.items())}
        return out


def _check(P: PolyPoisson, order: int, weights) -> bool:
    if order < 0:
        raise ValueError("order must be nonnegative")
    if not weights.exact and order > MAX_MC_ORDER:
        raise ValueError(f"Monte-Carlo weights are limited to order {MAX_MC_ORDER}")
    ok = P.is_poisson()
    if not ok:
        log.warning("alpha fails the Jacobi identity; the product need not be associative")
    return ok


def _cochain(P: PolyPoisson, k: int, f: Poly, g: Poly, weights, ef: Poly | None = None, eg: Poly | None = None):
    """``(p_k(f, g), error bound)`` with ``p_k = 1/k! sum_G W_G B_G(f, g)``.

    ``ef`` and ``eg`` are coefficientwise error bounds already carried by
    ``f`` and ``g``; the bound is propagated linearly through ``|B_G|``.
    """
    d = P.d
    scale = Fraction(1, factorial(k))
    value = Poly.zero(d)
    err = Poly.zero(d)
    track = not weights.exact or ef is not None or eg is not None
    absP = P.abs() if track else None
    for G in enumerate_admissible_graphs(k):
        B = bidifferential_operator(G, P, f, g)
        if not B and not (track and (ef or eg)):
            continue
        w, sw = weights.weight(G)
        if B:
            value = value + B.scale(w * scale if weights.exact else float(w) * float(scale))
        if not track:
            continue
        bound = Poly.zero(d)
        if sw:
            bound = bound + bidifferential_operator(G, absP, f.abs(), g.abs()).scale(float(sw))
        if ef:
            bound = bound + bidifferential_operator(G, absP, ef, g.abs() + (eg or Poly.zero(d))).scale(abs(float(w)) + float(sw))
        if eg:
            bound = bound + bidifferential_operator(G, absP, f.abs(), eg).scale(abs(float(w)) + float(sw))
        err = err + bound.scale(float(scale))
    return value, (err if track else None)


def star_product(P: PolyPoisson, f: Poly, g: Poly, order: int, weights) -> StarSeries:
    """``f * g`` modulo ``t^(order+1)``."""
    ok = _check(P, order, weights)
    coeffs, errs = [], []
    for k in range(order + 1):
        v, e = _cochain(P, k, f, g, weights)
        coeffs.append(v)
        errs.append(e)
    return _series(coeffs, errs, ok, weights)


def _series(coeffs, errs, ok, weights) -> StarSeries:
    if weights.exact:
        return StarSeries(coeffs, None, ok, "exact")
    d = coeffs[0].nvars
    errs = [e if e is not None else Poly.zero(d) for e in errs]
    return StarSeries(coeffs, errs, ok, "monte-carlo", dict(weights.estimates))


def _compose(P, left: StarSeries | None, lf: Poly | None, right: StarSeries | None, rg: Poly | None, order, weights):
    """Coefficients of ``(sum a_k t^k) * (sum b_k t^k)`` where one side may be a plain polynomial."""
    d = P.d

    def parts(series, poly):
        if series is None:
            return [(0, poly, None)]
        errs = series.errors or [None] * len(series.coefficients)
        return list(zip(range(len(series.coefficients)), series.coefficients, errs))

    coeffs = [Poly.zero(d) for _ in range(order + 1)]
    errs = [Poly.zero(d) for _ in range(order + 1)]
    for i, a, ea in parts(left, lf):
        for j, b, eb in parts(right, rg):
            for k in range(order + 1 - i - j):
                v, e = _cochain(P, k, a, b, weights, ea, eb)
                coeffs[i + j + k] = coeffs[i + j + k] + v
                if e is not None:
                    errs[i + j + k] = errs[i + j + k] + e
    return coeffs, errs


def associativity_residual(P: PolyPoisson, f: Poly, g: Poly, h: Poly, order: int, weights) -> StarSeries:
    """``(f * g) * h - f * (g * h)`` modulo ``t^(order+1)``."""
    ok = _check(P, order, weights)
    fg = star_product(P, f, g, order, weights)
    gh = star_product(P, g, h, order, weights)
    left, lerr = _compose(P, fg, None, None, h, order, weights)
    right, rerr = _compose(P, None, f, gh, None, order, weights)
    coeffs = [a - b for a, b in zip(left, right)]
    errs = [a + b for a, b in zip(lerr, rerr)]
    return _series(coeffs, errs, ok, weights)


__all__ = [
    "ExactWeights",
    "MissingWeightError",
    "MonteCarloWeights",
    "StarSeries",
    "associativity_residual",
    "star_product",
]
