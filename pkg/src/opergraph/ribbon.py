"""Ribbon graphs with labeled boundary components and the ribbon graph complex.

A ribbon graph on half-edges ``0..2m-1`` is a pair of permutations: ``sigma``
sends a half-edge to the next one counterclockwise at its vertex, and
``iota`` is the fixed-point-free involution pairing the two halves of each
edge.  Boundary components are the orbits of ``h -> sigma(iota(h))``.  Each
half-edge carries the label of the boundary component it starts.

Canonical form: for every half-edge ``h`` we relabel the graph by a
breadth-first walk from ``h`` (visiting ``sigma`` then ``iota``) and keep the
lexicographically least ``(sigma, iota, labels)`` code.  Starting points that
reach the same least code are exactly the automorphisms fixing every
boundary label, because a connected ribbon graph automorphism is determined
by the image of a single half-edge.

Orientation: an oriented generator is a canonical graph with its edges
ordered by their smaller half-edge.  A graph is killed when an automorphism
permutes the edges oddly.
"""
from __future__ import annotations

import csv
import io
import itertools
import json
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

from .errors import BudgetError
from .exactla import ChainComplex, RationalMatrix, betti_numbers

MAX_DIMENSION = 9  # bound on 6g - 6 + 3n


class RibbonError(ValueError):
    pass


def _cycles(perm) -> list[list[int]]:
    seen = [False] * len(perm)
    out = []
    for h in range(len(perm)):
        if seen[h]:
            continue
        cyc = []
        x = h
        while not seen[x]:
            seen[x] = True
            cyc.append(x)
            x = perm[x]
        out.append(cyc)
    return out


def perm_parity(perm) -> int:
    """0 for even, 1 for odd."""
    return sum(len(c) - 1 for c in _cycles(perm)) % 2


@dataclass(frozen=True)
class RibbonGraph:
    sigma: tuple[int, ...]
    iota: tuple[int, ...]
    labels: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "sigma", tuple(self.sigma))
        object.__setattr__(self, "iota", tuple(self.iota))
        object.__setattr__(self, "labels", tuple(self.labels))

    # structure ---------------------------------------------------------

    @property
    def num_half_edges(self) -> int:
        return len(self.sigma)

    @property
    def num_edges(self) -> int:
        return len(self.sigma) // 2

    @cached_property
    def vertex_cycles(self) -> list[list[int]]:
        return _cycles(self.sigma)

    @property
    def num_vertices(self) -> int:
        return len(self.vertex_cycles)

    @cached_property
    def boundary_perm(self) -> tuple[int, ...]:
        return tuple(self.sigma[self.iota[h]] for h in range(len(self.sigma)))

    @cached_property
    def edges(self) -> list[tuple[int, int]]:
        """Edges as ``(h, iota(h))`` with ``h < iota(h)``, ordered by ``h``."""
        return [(h, self.iota[h]) for h in range(len(self.iota)) if h < self.iota[h]]

    def edge_index(self) -> dict[int, int]:
        idx = {}
        for k, (a, b) in enumerate(self.edges):
            idx[a] = idx[b] = k
        return idx

    @property
    def euler_characteristic(self) -> int:
        return self.num_vertices - self.num_edges

    @property
    def num_boundaries(self) -> int:
        return len(_cycles(self.boundary_perm))

    def is_loop(self, k: int) -> bool:
        a, b = self.edges[k]
        return any(a in c and b in c for c in self.vertex_cycles)

    def validate(self) -> None:
        n2 = len(self.sigma)
        if n2 == 0 or n2 % 2:
            raise RibbonError("need a positive even number of half-edges")
        if sorted(self.sigma) != list(range(n2)) or sorted(self.iota) != list(range(n2)):
            raise RibbonError("sigma and iota must be permutations")
        if any(self.iota[h] == h or self.iota[self.iota[h]] != h for h in range(n2)):
            raise RibbonError("iota must be a fixed-point-free involution")
        if any(len(c) < 3 for c in self.vertex_cycles):
            raise RibbonError("vertices must have valence at least 3")
        if not _connected(self.sigma, self.iota):
            raise RibbonError("graph is not connected")
        if len(self.labels) != n2:
            raise RibbonError("one boundary label per half-edge required")
        orbits = _cycles(self.boundary_perm)
        seen = set()
        for orb in orbits:
            labs = {self.labels[h] for h in orb}
            if len(labs) != 1:
                raise RibbonError("labels must be constant on boundary components")
            seen |= labs
        if seen != set(range(1, len(orbits) + 1)) or len(seen) != len(orbits):
            raise RibbonError("boundary labels must be a bijection onto 1..n")

    def to_json(self) -> dict:
        orbits = _cycles(self.boundary_perm)
        return {
            "half_edges": len(self.sigma),
            "sigma": self.vertex_cycles,
            "iota": [list(e) for e in self.edges],
            "boundary_labels": {str(min(o)): self.labels[o[0]] for o in orbits},
        }

    @classmethod
    def from_json(cls, data) -> RibbonGraph:
        if isinstance(data, str):
            data = json.loads(data)
        n2 = int(data["half_edges"])
        sigma = [None] * n2
        for cyc in data["sigma"]:
            for i, h in enumerate(cyc):
                sigma[h] = cyc[(i + 1) % len(cyc)]
        iota = [None] * n2
        for a, b in data["iota"]:
            iota[a], iota[b] = b, a
        if None in sigma or None in iota:
            raise RibbonError("sigma and iota must cover every half-edge")
        phi = [sigma[iota[h]] for h in range(n2)]
        labels = [0] * n2
        for key, lab in data["boundary_labels"].items():
            h = int(key)
            x = h
            while True:
                labels[x] = int(lab)
                x = phi[x]
                if x == h:
                    break
        g = cls(tuple(sigma), tuple(iota), tuple(labels))
        g.validate()
        return g


def _connected(sigma, iota) -> bool:
    n2 = len(sigma)
    seen = {0}
    stack = [0]
    while stack:
        h = stack.pop()
        for x in (sigma[h], iota[h]):
            if x not in seen:
                seen.add(x)
                stack.append(x)
    return len(seen) == n2


def boundary_components(G: RibbonGraph) -> list[list[tuple[int, int]]]:
    """Boundary cycles as lists of directed edges ``(tail, head)`` in half-edges."""
    out = []
    for orb in _cycles(G.boundary_perm):
        out.append([(h, G.iota[h]) for h in orb])
    return out


def genus(G: RibbonGraph) -> int:
    n = G.num_boundaries
    twice = 2 - G.euler_characteristic - n
    if twice < 0 or twice % 2:
        raise RibbonError(f"malformed graph: chi + n = {G.euler_characteristic + n}")
    return twice // 2


def label_boundaries(sigma, iota, order=None) -> tuple[int, ...]:
    """Per-half-edge labels, numbering boundary orbits as listed in ``order``."""
    phi = [sigma[iota[h]] for h in range(len(sigma))]
    orbits = _cycles(phi)
    if order is None:
        order = range(1, len(orbits) + 1)
    labels = [0] * len(sigma)
    for orb, lab in zip(orbits, order):
        for h in orb:
            labels[h] = lab
    return tuple(labels)


# canonical form --------------------------------------------------------------

def _walk(G: RibbonGraph, start: int) -> list[int]:
    """Breadth-first relabeling from ``start``; returns new label per old half-edge."""
    n2 = len(G.sigma)
    new = [-1] * n2
    order = [start]
    new[start] = 0
    i = 0
    while i < len(order):
        h = order[i]
        i += 1
        for x in (G.sigma[h], G.iota[h]):
            if new[x] < 0:
                new[x] = len(order)
                order.append(x)
    return new


def _code(G: RibbonGraph, new: list[int]) -> tuple:
    n2 = len(new)
    inv = [0] * n2
    for old, nw in enumerate(new):
        inv[nw] = old
    sig = tuple(new[G.sigma[inv[k]]] for k in range(n2))
    io = tuple(new[G.iota[inv[k]]] for k in range(n2))
    lab = tuple(G.labels[inv[k]] for k in range(n2))
    return sig + io + lab


@dataclass(frozen=True)
class Canonical:
    graph: RibbonGraph  # canonical representative
    sign: int  # parity sign of the input's edge order against the canonical one
    killed: bool  # an odd automorphism exists
    automorphisms: int


def canonicalize(G: RibbonGraph) -> Canonical:
    n2 = len(G.sigma)
    best = None
    best_maps = []
    for h in range(n2):
        new = _walk(G, h)
        code = _code(G, new)
        if best is None or code < best:
            best = code
            best_maps = [new]
        elif code == best:
            best_maps.append(new)
    m = n2 // 2
    sig, io, lab = best[:n2], best[n2:2 * n2], best[2 * n2:]
    canon = RibbonGraph(sig, io, lab)
    cidx = canon.edge_index()
    # edge order comparison: input edge k -> canonical edge index
    def induced(new):
        return [cidx[new[a]] for a, _b in G.edges]

    first = induced(best_maps[0])
    sign = -1 if perm_parity(first) else 1
    killed = False
    inv_first = [0] * m
    for k, j in enumerate(first):
        inv_first[j] = k
    for new in best_maps[1:]:
        other = induced(new)
        # automorphism on input edges: k -> inv_first[other[k]]
        auto = [inv_first[other[k]] for k in range(m)]
        if perm_parity(auto):
            killed = True
            break
    return Canonical(canon, sign, killed, len(best_maps))


def automorphisms_bruteforce(G: RibbonGraph) -> list[tuple[int, ...]]:
    """All half-edge bijections commuting with sigma and iota and fixing labels.

    Backtracking search, independent of the canonical-form machinery.
    """
    n2 = len(G.sigma)
    out = []
    img = [-1] * n2
    used = [False] * n2

    sigma_inv = _inverse(G.sigma)

    def consistent(h):
        y = img[h]
        if G.labels[y] != G.labels[h]:
            return False
        for perm, inv in ((G.sigma, sigma_inv), (G.iota, G.iota)):
            nxt = img[perm[h]]
            if nxt >= 0 and nxt != perm[y]:
                return False
            prv = img[inv[h]]
            if prv >= 0 and perm[prv] != y:
                return False
        return True

    def rec(h):
        if h == n2:
            out.append(tuple(img))
            return
        for y in range(n2):
            if used[y]:
                continue
            img[h] = y
            used[y] = True
            if consistent(h):
                rec(h + 1)
            used[y] = False
            img[h] = -1

    rec(0)
    return out


def _inverse(perm):
    inv = [0] * len(perm)
    for i, p in enumerate(perm):
        inv[p] = i
    return inv


def has_odd_automorphism_bruteforce(G: RibbonGraph) -> bool:
    idx = G.edge_index()
    for a in automorphisms_bruteforce(G):
        if perm_parity([idx[a[h]] for h, _ in G.edges]):
            return True
    return False


# contraction -----------------------------------------------------------------

def contract(G: RibbonGraph, k: int) -> RibbonGraph:
    """Contract non-loop edge ``k``; merged cyclic order is ``(a_1..a_p, b_1..b_q)``."""
    a, b = G.edges[k]
    if G.is_loop(k):
        raise RibbonError("cannot contract a loop")
    sigma = list(G.sigma)
    inv = _inverse(sigma)
    pa, pb = inv[a], inv[b]  # predecessors of a and b at their vertices
    sa, sb = sigma[a], sigma[b]
    sigma[pa] = sb
    sigma[pb] = sa
    keep = [h for h in range(len(sigma)) if h not in (a, b)]
    ren = {h: i for i, h in enumerate(keep)}
    sig = tuple(ren[sigma[h]] for h in keep)
    io = tuple(ren[G.iota[h]] for h in keep)
    lab = tuple(G.labels[h] for h in keep)
    return RibbonGraph(sig, io, lab)


def contract_edge(G: RibbonGraph, k: int) -> tuple[int, RibbonGraph | None]:
    """Signed contraction of a canonical oriented generator.

    Returns ``(sign, canonical image)``, or ``(0, None)`` when the image is
    killed by an orientation-reversing automorphism.  ``G`` is oriented by
    its edge order; moving edge ``k`` last and dropping it orients ``G/e``.
    """
    m = G.num_edges
    c = canonicalize(contract(G, k))
    if c.killed:
        return 0, None
    sign = (-1) ** (m - 1 - k) * c.sign
    return sign, c.graph


GraphChain = dict  # RibbonGraph (canonical) -> Fraction


def graph_differential(chain: GraphChain) -> GraphChain:
    out: GraphChain = {}
    for G, coeff in chain.items():
        for k in range(G.num_edges):
            if G.is_loop(k):
                continue
            s, H = contract_edge(G, k)
            if s:
                v = out.get(H, 0) + s * coeff
                if v:
                    out[H] = Fraction(v)
                else:
                    out.pop(H, None)
    return out


def oriented(G: RibbonGraph) -> GraphChain:
    """The chain ``+-G`` in canonical form (empty if killed)."""
    c = canonicalize(G)
    if c.killed:
        return {}
    return {c.graph: Fraction(c.sign)}


# enumeration -----------------------------------------------------------------

def _involutions(elems):
    if not elems:
        yield []
        return
    a = elems[0]
    for i in range(1, len(elems)):
        b = elems[i]
        rest = elems[1:i] + elems[i + 1:]
        for inv in _involutions(rest):
            yield [(a, b)] + inv


def _pairs_to_perm(pairs, n2):
    io = [0] * n2
    for a, b in pairs:
        io[a], io[b] = b, a
    return tuple(io)


def check_stable(g: int, n: int) -> None:
    if g < 0 or n < 1:
        raise RibbonError("need g >= 0 and n >= 1")
    dim = 6 * g - 6 + 3 * n
    if dim <= 0:
        raise RibbonError(f"(g, n) = ({g}, {n}) is unstable")
    if dim > MAX_DIMENSION:
        raise BudgetError(f"6g - 6 + 3n = {dim} exceeds the supported bound {MAX_DIMENSION}")


def edge_range(g: int, n: int) -> range:
    """From the one-vertex graphs (``2g - 1 + n`` edges) to trivalent ones (``6g - 6 + 3n``)."""
    return range(2 * g - 1 + n, 6 * g - 6 + 3 * n + 1)


def _one_vertex_graphs(g: int, n: int) -> set[RibbonGraph]:
    m = 2 * g - 1 + n
    n2 = 2 * m
    sigma = tuple((h + 1) % n2 for h in range(n2))
    found = set()
    for pairs in _involutions(list(range(n2))):
        iota = _pairs_to_perm(pairs, n2)
        phi = [sigma[iota[h]] for h in range(n2)]
        if len(_cycles(phi)) != n:
            continue
        for order in itertools.permutations(range(1, n + 1)):
            G = RibbonGraph(sigma, iota, label_boundaries(sigma, iota, order))
            found.add(canonicalize(G).graph)
    return found


def _expand(G: RibbonGraph):
    """All graphs with one more edge whose contraction along it gives ``G``."""
    n2 = len(G.sigma)
    x, y = n2, n2 + 1
    for cyc in G.vertex_cycles:
        k = len(cyc)
        if k < 4:
            continue
        for start in range(k):
            for p in range(2, k - 1):
                arc_a = [cyc[(start + j) % k] for j in range(p)]
                arc_b = [cyc[(start + p + j) % k] for j in range(k - p)]
                sigma = list(G.sigma) + [0, 0]
                for cyc_new in (arc_a + [x], arc_b + [y]):
                    for i, h in enumerate(cyc_new):
                        sigma[h] = cyc_new[(i + 1) % len(cyc_new)]
                iota = list(G.iota) + [y, x]
                labels = list(G.labels) + [0, 0]
                phi = [sigma[iota[h]] for h in range(n2 + 2)]
                # new half-edges inherit the label of their (old) boundary orbit
                for h in (x, y):
                    z = phi[h]
                    while z >= n2:
                        z = phi[z]
                    labels[h] = G.labels[z]
                yield RibbonGraph(tuple(sigma), tuple(iota), tuple(labels))


@dataclass
class Census:
    g: int
    n: int
    generators: dict[int, list[RibbonGraph]]  # surviving oriented generators by edge count
    killed: dict[int, list[RibbonGraph]]

    def rows(self) -> list[tuple[int, int, int, int, int]]:
        return [(self.g, self.n, m, len(self.generators[m]), len(self.killed[m]))
                for m in sorted(self.generators)]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["g", "n", "m", "generator_count", "killed_count"])
        w.writerows(self.rows())
        return buf.getvalue()


def _sort_key(G: RibbonGraph):
    return G.sigma + G.iota + G.labels


def enumerate_ribbon_graphs(g: int, n: int) -> Census:
    """Isomorphism classes of ribbon graphs of genus ``g`` with ``n`` labeled boundaries."""
    check_stable(g, n)
    ms = edge_range(g, n)
    layers = {ms[0]: _one_vertex_graphs(g, n)}
    for m in ms[1:]:
        nxt = set()
        for G in layers[m - 1]:
            for H in _expand(G):
                nxt.add(canonicalize(H).graph)
        layers[m] = nxt
    gens, dead = {}, {}
    for m, graphs in layers.items():
        gens[m], dead[m] = [], []
        for G in sorted(graphs, key=_sort_key):
            (dead if canonicalize(G).killed else gens)[m].append(G)
    return Census(g, n, gens, dead)


def enumerate_bruteforce(g: int, n: int, m: int) -> set[RibbonGraph]:
    """All classes with ``m`` edges by exhausting vertex partitions and involutions."""
    n2 = 2 * m
    found = set()
    for parts in _partitions(n2, 3):
        sigma = [0] * n2
        pos = 0
        for p in parts:
            for i in range(p):
                sigma[pos + i] = pos + (i + 1) % p
            pos += p
        sigma = tuple(sigma)
        for pairs in _involutions(list(range(n2))):
            iota = _pairs_to_perm(pairs, n2)
            if not _connected(sigma, iota):
                continue
            phi = [sigma[iota[h]] for h in range(n2)]
            nb = len(_cycles(phi))
            chi = len(parts) - m
            if nb != n or 2 - chi - nb != 2 * g:
                continue
            for order in itertools.permutations(range(1, n + 1)):
                G = RibbonGraph(sigma, iota, label_boundaries(sigma, iota, order))
                found.add(canonicalize(G).graph)
    return found


def _partitions(total: int, least: int, maxpart: int | None = None):
    if maxpart is None:
        maxpart = total
    if total == 0:
        yield []
        return
    for p in range(min(total, maxpart), least - 1, -1):
        for rest in _partitions(total - p, least, p):
            yield [p] + rest


# the complex -------------------------------------------------------------------

def graph_complex(census: Census) -> ChainComplex:
    """``G^{g,n}`` with chain degree = edge count."""
    index = {m: {G: j for j, G in enumerate(gs)} for m, gs in census.generators.items()}
    dims = {m: len(gs) for m, gs in census.generators.items()}
    diffs = {}
    for m, gs in census.generators.items():
        if m - 1 not in index:
            continue
        target = index[m - 1]
        cols = []
        for G in gs:
            col = {}
            for H, c in graph_differential({G: Fraction(1)}).items():
                col[target[H]] = c
            cols.append(col)
        diffs[m] = RationalMatrix.from_columns(len(target), cols)
    return ChainComplex(dims, diffs)


def moduli_homology(g: int, n: int) -> dict[int, int]:
    """Nonzero Betti numbers of ``G^{g,n} (x) Q`` keyed by edge count."""
    betti = betti_numbers(graph_complex(enumerate_ribbon_graphs(g, n)))
    return {m: b for m, b in sorted(betti.items()) if b}


def moduli_cohomology(g: int, n: int) -> dict[int, int]:
    """The same numbers re-indexed as ``H^{6g-6+3n-m}(M_{g,n}; Q)``."""
    top = 6 * g - 6 + 3 * n
    return {top - m: b for m, b in moduli_homology(g, n).items()}


# named small graphs used in docs and tests --------------------------------------

def from_cycles(vertex_cycles, edge_pairs, boundary_order=None) -> RibbonGraph:
    n2 = sum(len(c) for c in vertex_cycles)
    sigma = [0] * n2
    for cyc in vertex_cycles:
        for i, h in enumerate(cyc):
            sigma[h] = cyc[(i + 1) % len(cyc)]
    iota = _pairs_to_perm(edge_pairs, n2)
    sigma = tuple(sigma)
    return RibbonGraph(sigma, iota, label_boundaries(sigma, iota, boundary_order))
