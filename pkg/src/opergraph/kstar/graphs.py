"""Admissible graphs and their bidifferential operators."""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path

from ..errors import BudgetError
from .poly import Poly

MAX_GRAPH_ORDER = 3

# ground vertices: f sits at LEFT, g at RIGHT
LEFT = -1
RIGHT = -2
_GROUND_NAMES = {LEFT: "b1", RIGHT: "b2"}


class GraphError(ValueError):
    pass


@dataclass(frozen=True)
class AdmissibleGraph:
    """``targets[v-1] = (first, second)`` for aerial vertex ``v``.

    Aerial vertices are ``1..n``; the ground vertices are ``LEFT`` and
    ``RIGHT``.  Both targets of a vertex are distinct and differ from the
    vertex itself.
    """

    targets: tuple

    def __post_init__(self):
        n = len(self.targets)
        allowed = set(range(1, n + 1)) | {LEFT, RIGHT}
        for v, pair in enumerate(self.targets, start=1):
            if len(pair) != 2:
                raise GraphError(f"vertex {v} must have exactly two edges")
            a, b = pair
            if a == b:
                raise GraphError(f"vertex {v} has both edges into {a}")
            if v in pair:
                raise GraphError(f"vertex {v} has a loop")
            if a not in allowed or b not in allowed:
                raise GraphError(f"vertex {v} has a target outside the graph")

    @property
    def n(self) -> int:
        return len(self.targets)

    def edges(self) -> list[tuple[int, int]]:
        """Edges ``(source, target)`` in wedge order: by vertex, then first/second."""
        return [(v, t) for v, pair in enumerate(self.targets, start=1) for t in pair]

    def in_degree(self, w: int) -> int:
        return sum(t == w for pair in self.targets for t in pair)

    @property
    def code(self) -> str:
        return ";".join(",".join(_name(t) for t in pair) for pair in self.targets)

    @classmethod
    def from_code(cls, code: str) -> AdmissibleGraph:
        code = code.strip()
        if not code:
            return cls(())
        pairs = []
        for part in code.split(";"):
            items = [s.strip() for s in part.split(",")]
            if len(items) != 2:
                raise GraphError(f"malformed graph code {code!r}")
            pairs.append(tuple(_parse_name(s) for s in items))
        return cls(tuple(pairs))

    def mirror(self) -> AdmissibleGraph:
        """Exchange the two ground vertices."""
        swap = {LEFT: RIGHT, RIGHT: LEFT}
        return AdmissibleGraph(tuple(tuple(swap.get(t, t) for t in pair) for pair in self.targets))

    def relabel(self, perm: tuple) -> AdmissibleGraph:
        """Rename aerial vertex ``v`` to ``perm[v-1]``."""
        n = self.n
        new = [None] * n
        for v, pair in enumerate(self.targets, start=1):
            new[perm[v - 1] - 1] = tuple(perm[t - 1] if t > 0 else t for t in pair)
        return AdmissibleGraph(tuple(new))


def _name(t: int) -> str:
    return _GROUND_NAMES.get(t, str(t))


def _parse_name(s: str) -> int:
    if s == "b1":
        return LEFT
    if s == "b2":
        return RIGHT
    try:
        v = int(s)
    except ValueError:
        raise GraphError(f"unknown vertex name {s!r}") from None
    if v < 1:
        raise GraphError(f"aerial vertices are numbered from 1, got {v}")
    return v


def enumerate_admissible_graphs(n: int) -> list[AdmissibleGraph]:
    """All labeled admissible graphs with ``n`` aerial vertices, in a fixed order."""
    if n < 0:
        raise GraphError(f"graph order must be nonnegative, got {n}")
    if n > MAX_GRAPH_ORDER:
        raise BudgetError(f"graph order {n} exceeds the supported bound {MAX_GRAPH_ORDER}")
    return list(_enumerate(n))


@lru_cache(maxsize=None)
def _enumerate(n: int) -> tuple:
    per_vertex = []
    for v in range(1, n + 1):
        allowed = [LEFT, RIGHT] + [w for w in range(1, n + 1) if w != v]
        per_vertex.append(list(itertools.permutations(allowed, 2)))
    return tuple(AdmissibleGraph(tuple(choice)) for choice in itertools.product(*per_vertex))


def canonical_graph(G: AdmissibleGraph) -> tuple[int, AdmissibleGraph]:
    """``(sign, H)`` with ``W_G = sign * W_H`` and ``H`` the least equivalent graph.

    Relabeling aerial vertices permutes the angle 2-forms and the
    coordinates in pairs, so it preserves the weight; swapping the two
    edges of a vertex negates it.
    """
    best = None
    for perm in itertools.permutations(range(1, G.n + 1)):
        H = G.relabel(perm)
        sign = 1
        pairs = []
        for pair in H.targets:
            key = tuple(sorted(pair))
            if key != pair:
                sign = -sign
            pairs.append(key)
        cand = AdmissibleGraph(tuple(pairs))
        if best is None or cand.code < best[1].code:
            best = (sign, cand)
    return best


# Poisson tensors ---------------------------------------------------------

class PoissonError(ValueError):
    pass


class PolyPoisson:
    """An antisymmetric bivector ``alpha^{ij}`` with polynomial entries on ``R^d``."""

    def __init__(self, d: int, upper: dict):
        """``upper[(i, j)]`` for ``i < j`` (0-based); missing entries are zero."""
        if d < 1:
            raise PoissonError("dimension must be positive")
        self.d = d
        self._entries: dict = {}
        for (i, j), p in upper.items():
            if not (0 <= i < d and 0 <= j < d):
                raise PoissonError(f"index ({i + 1},{j + 1}) outside dimension {d}")
            if p.nvars != d:
                raise PoissonError("entry has the wrong number of variables")
            if i == j:
                if p:
                    raise PoissonError("diagonal entries must vanish")
                continue
            if i > j:
                i, j, p = j, i, -p
            if (i, j) in self._entries:
                raise PoissonError(f"entry ({i + 1},{j + 1}) given twice")
            self._entries[(i, j)] = p

    def entry(self, i: int, j: int) -> Poly:
        if i == j:
            return Poly.zero(self.d)
        if i < j:
            return self._entries.get((i, j), Poly.zero(self.d))
        return -self._entries.get((j, i), Poly.zero(self.d))

    def abs(self) -> AbsTensor:
        """Entrywise absolute coefficients, used for error bounds."""
        return AbsTensor(self.d, {(i, j): self.entry(i, j).abs() for i in range(self.d) for j in range(self.d)})

    def max_degree(self) -> int:
        return max((p.total_degree() for p in self._entries.values() if p), default=0)

    def bracket(self, f: Poly, g: Poly) -> Poly:
        """``{f, g} = alpha^{ij} d_i f d_j g``."""
        out = Poly.zero(self.d)
        for i in range(self.d):
            fi = f.diff(i)
            if not fi:
                continue
            for j in range(self.d):
                a = self.entry(i, j)
                if a:
                    out = out + a * fi * g.diff(j)
        return out

    def jacobi_residuals(self) -> dict:
        """``sum_l alpha^{il} d_l alpha^{jk} + cyclic`` for every ``i < j < k``."""
        out = {}
        for i, j, k in itertools.combinations(range(self.d), 3):
            acc = Poly.zero(self.d)
            for a, b, c in ((i, j, k), (j, k, i), (k, i, j)):
                for l in range(self.d):
                    acc = acc + self.entry(a, l) * self.entry(b, c).diff(l)
            out[(i, j, k)] = acc
        return out

    def is_poisson(self) -> bool:
        return all(not r for r in self.jacobi_residuals().values())

    @classmethod
    def from_json(cls, data) -> PolyPoisson:
        if isinstance(data, (str, Path)):
            data = json.loads(Path(data).read_text())
        try:
            d = int(data["d"])
            upper = {}
            for key, terms in data["alpha"].items():
                i, j = (int(s) - 1 for s in key.split(","))
                upper[(i, j)] = Poly.from_json(d, terms)
        except (KeyError, TypeError, ValueError) as exc:
            raise PoissonError(f"malformed Poisson structure: {exc}") from None
        return cls(d, upper)

    def to_json(self) -> dict:
        return {
            "d": self.d,
            "alpha": {f"{i + 1},{j + 1}": p.to_json() for (i, j), p in sorted(self._entries.items()) if p},
        }


class AbsTensor:
    """Coefficientwise absolute value of a Poisson tensor (no longer antisymmetric)."""

    def __init__(self, d: int, entries: dict):
        self.d = d
        self._entries = entries

    def entry(self, i: int, j: int) -> Poly:
        return self._entries[(i, j)]

    def max_degree(self) -> int:
        return max((p.total_degree() for p in self._entries.values() if p), default=0)


# bidifferential operators -------------------------------------------------

def bidifferential_operator(G: AdmissibleGraph, P: PolyPoisson, f: Poly, g: Poly) -> Poly:
    """``B_G(f, g)``: one ``alpha`` per aerial vertex, ``f`` and ``g`` on the ground.

    Each edge carries a summation index; the edge acts as the partial
    derivative in that index on its target's content, and the first and
    second edges of a vertex fill the first and second index of its
    ``alpha``.
    """
    d = P.d
    if f.nvars != d or g.nvars != d:
        raise PoissonError(f"polynomials must have {d} variables")
    n = G.n
    if n == 0:
        return f * g
    # prune by degree: a content differentiated more often than its degree vanishes
    if P.max_degree() < max(G.in_degree(v) for v in range(1, n + 1)):
        return Poly.zero(d)
    if f.total_degree() < G.in_degree(LEFT) or g.total_degree() < G.in_degree(RIGHT):
        return Poly.zero(d)
    if not f or not g:
        return Poly.zero(d)

    edges = G.edges()
    incoming: dict[int, list[int]] = {}
    for e, (_, t) in enumerate(edges):
        incoming.setdefault(t, []).append(e)

    cache: dict = {}

    def content(v: int, idx: tuple) -> Poly:
        ders = tuple(sorted(idx[e] for e in incoming.get(v, ())))
        if v == LEFT:
            key = (v, ders)
            base = f
        elif v == RIGHT:
            key = (v, ders)
            base = g
        else:
            slot = (idx[2 * v - 2], idx[2 * v - 1])
            key = (v, slot, ders)
            base = None
        hit = cache.get(key)
        if hit is None:
            if base is None:
                base = P.entry(*slot)
            hit = base.diff_multi(ders)
            cache[key] = hit
        return hit

    order = list(range(1, n + 1)) + [LEFT, RIGHT]
    out = Poly.zero(d)
    for idx in itertools.product(range(d), repeat=len(edges)):
        term = None
        for v in order:
            c = content(v, idx)
            if not c:
                term = None
                break
            term = c if term is None else term * c
        if term is not None:
            out = out + term
    return out


__all__ = [
    "AbsTensor",
    "AdmissibleGraph",
    "GraphError",
    "LEFT",
    "MAX_GRAPH_ORDER",
    "PoissonError",
    "PolyPoisson",
    "RIGHT",
    "bidifferential_operator",
    "canonical_graph",
    "enumerate_admissible_graphs",
]
