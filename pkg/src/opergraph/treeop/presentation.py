"""Operads given by generators and relations.

The free operad ``F(S)(n)`` has the decorated planar trees with ``n``
labeled leaves as a basis.  The arity-``n`` slice of the ideal ``(R)`` is
spanned by every composite ``C o_i gamma(r; T_1, ..., T_k)`` of a relation
``r`` with decorated trees inside and outside, followed (for symmetric
operads) by all relabelings of the leaves.  The quotient dimension is the
corank of that span.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import factorial

from ..errors import BudgetError
from ..exactla import SparseEchelon, _primitive
from .trees import (
    TreeChain,
    Vertex,
    add_term,
    arity,
    is_leaf,
    leaves,
    parse_tree,
    relabel,
    shift,
    to_string,
    vertices,
)

MAX_PRESENTATION_ARITY = 6


class PresentationError(ValueError):
    pass


@dataclass(frozen=True)
class OperadPresentation:
    """Generators by arity plus relations given as tree chains."""

    generators: dict[int, tuple[str, ...]]
    relations: tuple[TreeChain, ...]
    symmetric: bool = True
    name: str = ""
    _labels: dict = field(init=False, repr=False, compare=False, default=None)

    def __post_init__(self):
        labels = {g: a for a, gs in self.generators.items() for g in gs}
        if any(a < 1 for a in self.generators):
            raise PresentationError("generator arities must be positive")
        object.__setattr__(self, "_labels", labels)
        for r in self.relations:
            arities = {arity(t) for t in r}
            if len(arities) > 1:
                raise PresentationError("relation mixes arities")
            for t in r:
                for v in vertices(t):
                    if labels.get(v.label) != len(v.children):
                        raise PresentationError(
                            f"vertex decorated {v.label!r} with {len(v.children)} inputs "
                            f"in relation term {to_string(t)}"
                        )

    def generator_arity(self, g: str) -> int:
        return self._labels[g]


def _chain(*terms: tuple[int, str]) -> TreeChain:
    c: TreeChain = {}
    for coeff, s in terms:
        add_term(c, parse_tree(s), Fraction(coeff))
    return c


def named_presentation(name: str) -> OperadPresentation:
    """The Assoc, Lie and Poisson presentations with binary generators."""
    name = name.lower()
    if name == "assoc":
        return OperadPresentation(
            {2: ("•",)},
            (_chain((1, "•(•(1 2) 3)"), (-1, "•(1 •(2 3))")),),
            name="assoc",
        )
    if name == "lie":
        return OperadPresentation(
            {2: ("•",)},
            (
                _chain((1, "•(1 2)"), (1, "•(2 1)")),
                _chain((1, "•(•(1 2) 3)"), (1, "•(•(2 3) 1)"), (1, "•(•(3 1) 2)")),
            ),
            name="lie",
        )
    if name == "poisson":
        return OperadPresentation(
            {2: ("•", "∘")},
            (
                _chain((1, "•(1 2)"), (-1, "•(2 1)")),
                _chain((1, "•(•(1 2) 3)"), (-1, "•(1 •(2 3))")),
                _chain((1, "∘(1 2)"), (1, "∘(2 1)")),
                _chain((1, "∘(∘(1 2) 3)"), (1, "∘(∘(2 3) 1)"), (1, "∘(∘(3 1) 2)")),
                _chain((1, "∘(1 •(2 3))"), (-1, "•(∘(1 2) 3)"), (-1, "•(2 ∘(1 3))")),
            ),
            name="poisson",
        )
    raise PresentationError(f"unknown presentation {name!r}")


def decorated_trees(gens: dict[int, tuple[str, ...]], n: int, start: int = 1) -> list:
    """Decorated planar trees with leaves ``start..start+n-1`` in planar order."""
    return list(_decorated(tuple(sorted((a, tuple(g)) for a, g in gens.items())), n, start))


@lru_cache(maxsize=None)
def _decorated(gens: tuple, n: int, start: int) -> tuple:
    if n == 1:
        return (start,)
    out = []
    for a, labels in gens:
        if a > n or a < 2:
            continue
        for comp in _compositions(n, a):
            partial = [()]
            offset = start
            for size in comp:
                subs = _decorated(gens, size, offset)
                partial = [p + (s,) for p in partial for s in subs]
                offset += size
            for lab in labels:
                out.extend(Vertex(p, lab) for p in partial)
    return tuple(out)


def _compositions(n: int, k: int):
    if k == 1:
        yield (n,)
        return
    for first in range(1, n - k + 2):
        for rest in _compositions(n - first, k - 1):
            yield (first,) + rest


def free_basis(P: OperadPresentation, n: int) -> list:
    """Basis of ``F(S)(n)``: all labelings if symmetric, else the standard one."""
    shapes = decorated_trees(P.generators, n)
    if not P.symmetric:
        return shapes
    out = []
    for perm in itertools.permutations(range(1, n + 1)):
        out.extend(relabel(t, lambda x, p=perm: p[x - 1]) for t in shapes)
    return out


def _standardize(t) -> object:
    """Relabel leaves to ``1..n`` in planar order (relations may use any labels)."""
    order = leaves(t)
    pos = {lab: i + 1 for i, lab in enumerate(order)}
    return relabel(t, pos), order


def _compose_relation(r: TreeChain, inner: tuple) -> TreeChain:
    """``gamma(r; T_1, ..., T_k)`` for inner trees with standard labels from 1."""
    sizes = [arity(t) for t in inner]
    starts = list(itertools.accumulate([0] + sizes[:-1]))
    out: TreeChain = {}
    for t, c in r.items():
        def sub(node):
            if is_leaf(node):
                j = node - 1
                return shift(inner[j], starts[j])
            return Vertex(tuple(sub(ch) for ch in node.children), node.label)

        add_term(out, sub(t), c)
    return out


def _graft_chain_plain(outer, slot: int, chain: TreeChain) -> TreeChain:
    """Unsigned ``outer o_slot chain`` (free operads of degree-0 generators)."""
    out: TreeChain = {}
    width = None
    for t, c in chain.items():
        width = arity(t)

        def sub(node):
            if is_leaf(node):
                if node == slot:
                    return shift(t, slot - 1)
                return node if node < slot else node + width - 1
            return Vertex(tuple(sub(ch) for ch in node.children), node.label)

        add_term(out, sub(outer), c)
    return out


def ideal_spanning_set(P: OperadPresentation, n: int):
    """Yield the composites spanning ``(R)(n)`` as tree chains."""
    rels = []
    for r in P.relations:
        k = arity(next(iter(r)))
        if k <= n:
            rels.append((k, r))
    trees_by_arity = {m: decorated_trees(P.generators, m) for m in range(1, n + 1)}
    perms = list(itertools.permutations(range(1, n + 1))) if P.symmetric else [tuple(range(1, n + 1))]
    seen = set()
    for k, r in rels:
        for outer_arity in range(1, n - k + 2):
            inner_total = n - outer_arity + 1
            for sizes in _compositions(inner_total, k):
                for inner in itertools.product(*(trees_by_arity[s] for s in sizes)):
                    core = _compose_relation(r, inner)
                    for outer in trees_by_arity[outer_arity]:
                        for slot in range(1, outer_arity + 1):
                            elt = _graft_chain_plain(outer, slot, core)
                            for perm in perms:
                                img = {relabel(t, lambda x, p=perm: p[x - 1]): c for t, c in elt.items()}
                                key = frozenset(img.items())
                                if key in seen:
                                    continue
                                seen.add(key)
                                yield img


def presentation_dimension(P: OperadPresentation, n: int) -> int:
    """Dimension of the arity-``n`` component of ``F(S)/(R)``."""
    if n < 1:
        raise PresentationError("arity must be positive")
    if n > MAX_PRESENTATION_ARITY:
        raise BudgetError(f"arity {n} exceeds the supported bound {MAX_PRESENTATION_ARITY}")
    basis = free_basis(P, n)
    index = {t: j for j, t in enumerate(basis)}
    ech = SparseEchelon()
    for elt in ideal_spanning_set(P, n):
        row = {index[t]: c for t, c in elt.items()}
        ech.add(_primitive(row))
        if ech.rank == len(basis):
            break
    return len(basis) - ech.rank


# independent oracle --------------------------------------------------------

def _word_poly_mul(p: dict, q: dict) -> dict:
    out: dict = {}
    for u, a in p.items():
        for v, b in q.items():
            w = u + v
            out[w] = out.get(w, 0) + a * b
    return {w: c for w, c in out.items() if c}


def _lie_bracket(p: dict, q: dict) -> dict:
    out = dict(_word_poly_mul(p, q))
    for w, c in _word_poly_mul(q, p).items():
        out[w] = out.get(w, 0) - c
    return {w: c for w, c in out.items() if c}


def _symmetrize(factors: list[dict]) -> dict:
    out: dict = {}
    for order in itertools.permutations(range(len(factors))):
        prod = {(): 1}
        for j in order:
            prod = _word_poly_mul(prod, factors[j])
        for w, c in prod.items():
            out[w] = out.get(w, 0) + c
    return out


def _poisson_eval(t):
    """Evaluate in the free Poisson algebra Sym(Lie(x)); terms are (coeff, [lie polys])."""
    if is_leaf(t):
        return [(1, [{(t,): 1}])]
    a, b = (_poisson_eval(c) for c in t.children)
    out = []
    if t.label == "•":
        for ca, fa in a:
            for cb, fb in b:
                out.append((ca * cb, fa + fb))
        return out
    # bracket: biderivation extending the Lie bracket
    for ca, fa in a:
        for cb, fb in b:
            for i, x in enumerate(fa):
                for j, y in enumerate(fb):
                    br = _lie_bracket(x, y)
                    if br:
                        rest = fa[:i] + fa[i + 1:] + fb[:j] + fb[j + 1:]
                        out.append((ca * cb, [br] + rest))
    return out


def _free_algebra_image(name: str, t) -> dict:
    if name == "assoc":
        return {tuple(leaves(t)): 1}
    if name == "lie":
        def ev(s):
            if is_leaf(s):
                return {(s,): 1}
            x, y = (ev(c) for c in s.children)
            return _lie_bracket(x, y)

        return ev(t)
    if name == "poisson":
        vec: dict = {}
        for c, factors in _poisson_eval(t):
            for w, v in _symmetrize(factors).items():
                vec[w] = vec.get(w, 0) + c * v
        return {w: v for w, v in vec.items() if v}
    raise PresentationError(f"no free-algebra oracle for {name!r}")


def free_algebra_dimension(name: str, n: int) -> int:
    """Span of all arity-``n`` operations evaluated in the free algebra on ``x_1..x_n``.

    Assoc evaluates in noncommutative words, Lie as nested commutators, and
    Poisson in Sym(Lie) embedded into words by symmetrization.  This does not
    use the relations at all.
    """
    P = named_presentation(name)
    words = {w: j for j, w in enumerate(itertools.permutations(range(1, n + 1)))}
    ech = SparseEchelon()
    for t in free_basis(P, n):
        img = _free_algebra_image(name, t)
        ech.add({words[w]: c for w, c in img.items()})
        if ech.rank == factorial(n):
            break
    return ech.rank
