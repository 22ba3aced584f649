"""Graph weights: exact tables and Monte-Carlo integration over the upper half-plane.

The weight of an admissible graph with ``n`` aerial vertices is

    W = (2 pi)^(-2n) * integral over H^n of  wedge_edges dphi(z_source, z_target)

with ``phi(p, q) = arg((q - p) / (q - conj(p)))``, ground points at 0 and 1,
and the wedge taken in edge order (vertex by vertex, first edge then second).
The ``1/n!`` of the graph sum lives in the star product, not here.

Each aerial point is sampled uniformly on the unit disk and mapped to the
half-plane by ``z = i (1 + w) / (1 - w)``; the estimator is the angle form
coefficient times the area Jacobian ``4 / |1 - w|^4`` times ``pi`` per point.
"""
from __future__ import annotations

import itertools
import json
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

import numpy as np

from ..errors import BudgetError
from .graphs import LEFT, RIGHT, AdmissibleGraph, GraphError

BLOCK_SIZE = 1 << 15
MAX_SAMPLES = 10 ** 8
GROUND = {LEFT: 0.0 + 0.0j, RIGHT: 1.0 + 0.0j}


@dataclass(frozen=True)
class WeightEstimate:
    mean: float
    std_error: float
    samples: int
    seed: int
    degenerate: int = 0

    def to_json(self) -> dict:
        return {
            "mean": self.mean,
            "std_error": self.std_error,
            "samples": self.samples,
            "seed": self.seed,
            "degenerate": self.degenerate,
        }


def _stream_key(G: AdmissibleGraph) -> list[int]:
    """Integer key naming the graph's random stream, so distinct graphs draw independently."""
    key = [G.n]
    for pair in G.targets:
        key.extend(t + 2 for t in pair)  # ground -1, -2 become 1, 0
    return key


def _sample_points(rng: np.random.Generator, size: int, n: int):
    r = np.sqrt(rng.random((size, n)))
    theta = 2.0 * np.pi * rng.random((size, n))
    w = r * np.exp(1j * theta)
    z = 1j * (1 + w) / (1 - w)
    jac = np.pi * 4.0 / np.abs(1 - w) ** 4
    return z, jac


def _form_matrix(G: AdmissibleGraph, z: np.ndarray) -> np.ndarray:
    """Coefficients of each ``dphi`` in ``dx_1, dy_1, ..., dx_n, dy_n`` per sample."""
    size, n = z.shape
    mat = np.zeros((size, 2 * n, 2 * n))
    for row, (v, t) in enumerate(G.edges()):
        p = z[:, v - 1]
        q = GROUND[t] if t < 0 else z[:, t - 1]
        u1 = 1.0 / (q - p)
        u2 = 1.0 / (q - np.conj(p))
        col = 2 * (v - 1)
        mat[:, row, col] = -u1.imag + u2.imag
        mat[:, row, col + 1] = -u1.real - u2.real
        if t > 0:
            col = 2 * (t - 1)
            mat[:, row, col] = u1.imag - u2.imag
            mat[:, row, col + 1] = u1.real - u2.real
    return mat


def _evaluate(G: AdmissibleGraph, z: np.ndarray, jac: np.ndarray) -> np.ndarray:
    with np.errstate(all="ignore"):
        det = np.linalg.det(_form_matrix(G, z))
        return det * np.prod(jac, axis=1) / (2.0 * np.pi) ** (2 * G.n)


def _block(G: AdmissibleGraph, seq: np.random.SeedSequence, size: int) -> tuple[float, float, int]:
    rng = np.random.default_rng(seq)
    z, jac = _sample_points(rng, size, G.n)
    vals = _evaluate(G, z, jac)
    bad = ~np.isfinite(vals)
    degenerate = 0
    while bad.any():
        k = int(bad.sum())
        degenerate += k
        z2, jac2 = _sample_points(rng, k, G.n)
        vals[bad] = _evaluate(G, z2, jac2)
        bad = ~np.isfinite(vals)
    return float(vals.sum()), float(np.dot(vals, vals)), degenerate


def default_workers() -> int:
    env = os.environ.get("OPERGRAPH_WORKERS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def graph_weight(G: AdmissibleGraph, samples: int, seed: int, workers: int | None = None) -> WeightEstimate:
    """Monte-Carlo estimate of ``W_G``; bit-identical for fixed ``(G, samples, seed)``.

    The graph selects its own stream under ``seed``; samples are split into
    fixed blocks, each with a spawned child stream, and block sums are
    combined in block order, so the worker count does not affect the result.
    """
    if G.n < 1:
        raise GraphError("the weight of the empty graph is 1 by convention; nothing to estimate")
    if samples < 2:
        raise ValueError("need at least two samples")
    if samples > MAX_SAMPLES:
        raise BudgetError(f"sample count exceeds {MAX_SAMPLES}")
    root = np.random.SeedSequence(entropy=seed, spawn_key=tuple(_stream_key(G)))
    nblocks = -(-samples // BLOCK_SIZE)
    children = root.spawn(nblocks)
    sizes = [BLOCK_SIZE] * (nblocks - 1) + [samples - BLOCK_SIZE * (nblocks - 1)]
    workers = workers or default_workers()
    if workers > 1 and nblocks > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda a: _block(G, *a), zip(children, sizes)))
    else:
        parts = [_block(G, c, s) for c, s in zip(children, sizes)]
    total = sum(p[0] for p in parts)
    total_sq = sum(p[1] for p in parts)
    degenerate = sum(p[2] for p in parts)
    mean = total / samples
    var = max(total_sq / samples - mean * mean, 0.0) * samples / (samples - 1)
    return WeightEstimate(mean, float(np.sqrt(var / samples)), samples, seed, degenerate)


# exact tables -------------------------------------------------------------

def first_order_weights() -> dict[str, Fraction]:
    return {"b1,b2": Fraction(1, 2), "b2,b1": Fraction(-1, 2)}


def moyal_weight_table(order: int) -> dict[str, Fraction]:
    """Weights of the graphs whose edges all land on the ground, through ``order``.

    The angle form of such a graph is a product of one 2-form per aerial
    vertex, so its weight factors into first-order weights ``+-1/2``.  These
    are the only graphs that contribute when ``alpha`` is constant.
    """
    table = {"": Fraction(1)}
    signs = {(LEFT, RIGHT): Fraction(1, 2), (RIGHT, LEFT): Fraction(-1, 2)}
    for n in range(1, order + 1):
        for pairs in itertools.product(signs, repeat=n):
            w = Fraction(1)
            for pair in pairs:
                w *= signs[pair]
            table[AdmissibleGraph(pairs).code] = w
    return table


def load_weight_table(path) -> dict[str, Fraction]:
    """JSON ``{graph-code: [num, den]}``."""
    data = json.loads(Path(path).read_text())
    table = {}
    for code, val in data.items():
        G = AdmissibleGraph.from_code(code)
        num, den = val
        table[G.code] = Fraction(int(num), int(den))
    return table


def weight_table_to_json(table: dict[str, Fraction]) -> dict:
    return {code: [w.numerator, w.denominator] for code, w in sorted(table.items())}


__all__ = [
    "BLOCK_SIZE",
    "WeightEstimate",
    "default_workers",
    "first_order_weights",
    "graph_weight",
    "load_weight_table",
    "moyal_weight_table",
    "weight_table_to_json",
]
