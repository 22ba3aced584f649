"""Planar rooted trees with labeled leaves.

A tree is either a leaf, stored as its ``int`` label, or a :class:`Vertex`
holding an ordered tuple of subtrees and an optional generator decoration.
The bare leaf ``1`` is the unit tree (no vertices, one edge).  Because the
embedding is planar, the nested structure is already a canonical code, so
equality and hashing come from the dataclass.

Every node owns the edge directly below it, so ``e(T)`` is the node count and
the root edge belongs to the root node.  Signs of grafting and contraction
read as reordering a wedge of non-root edges listed in preorder.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Union


@dataclass(frozen=True, slots=True)
class Vertex:
    children: tuple
    label: str = ""

    def __post_init__(self):
        if len(self.children) < 1:
            raise ValueError("a vertex needs at least one child")

    def __str__(self):
        return to_string(self)


Tree = Union[int, Vertex]
TreeChain = dict  # Tree -> Fraction, no zero coefficients


def is_leaf(t: Tree) -> bool:
    return isinstance(t, int)


def leaves(t: Tree) -> list[int]:
    """Leaf labels in planar (left to right) order."""
    if is_leaf(t):
        return [t]
    out: list[int] = []
    for c in t.children:
        out.extend(leaves(c))
    return out


def arity(t: Tree) -> int:
    if is_leaf(t):
        return 1
    return sum(arity(c) for c in t.children)


def num_vertices(t: Tree) -> int:
    if is_leaf(t):
        return 0
    return 1 + sum(num_vertices(c) for c in t.children)


def num_edges(t: Tree) -> int:
    """Edges including the root edge and the leaf edges."""
    if is_leaf(t):
        return 1
    return 1 + sum(num_edges(c) for c in t.children)


def degree(t: Tree) -> int:
    """``|T| = v(T) + 1 - n``."""
    return num_vertices(t) + 1 - arity(t)


def vertices(t: Tree) -> Iterator[Vertex]:
    if not is_leaf(t):
        yield t
        for c in t.children:
            yield from vertices(c)


def relabel(t: Tree, mapping) -> Tree:
    """Apply ``mapping`` (callable or sequence/dict indexed by label) to the leaves."""
    f = mapping if callable(mapping) else mapping.__getitem__
    if is_leaf(t):
        return f(t)
    return Vertex(tuple(relabel(c, f) for c in t.children), t.label)


def shift(t: Tree, k: int) -> Tree:
    if k == 0:
        return t
    return relabel(t, lambda x: x + k)


def corolla(n: int, label: str = "") -> Vertex:
    if n < 2:
        raise ValueError("corollas have at least two leaves")
    return Vertex(tuple(range(1, n + 1)), label)


def _compositions(n: int, k: int) -> Iterator[tuple[int, ...]]:
    if k == 1:
        if n >= 1:
            yield (n,)
        return
    for first in range(1, n - k + 2):
        for rest in _compositions(n - first, k - 1):
            yield (first,) + rest


def _shapes(n: int, min_children: int, start: int) -> list[Tree]:
    if n == 1:
        return [start]
    out: list[Tree] = []
    for k in range(min_children, n + 1):
        for comp in _compositions(n, k):
            # cartesian product of subtree shapes with consecutive labels
            partial: list[tuple] = [()]
            offset = start
            for size in comp:
                subs = _shapes(size, min_children, offset)
                partial = [p + (s,) for p in partial for s in subs]
                offset += size
            out.extend(Vertex(p) for p in partial)
    return out


def enumerate_planar_trees(n: int, min_children: int = 2) -> list[Tree]:
    """All planar trees with leaves ``1..n`` in planar order.

    Every internal vertex has at least ``min_children`` children.  Trees are
    returned sorted by vertex count, then by their string form.
    """
    if n < 1:
        raise ValueError("trees need at least one leaf")
    if min_children < 1:
        raise ValueError("min_children must be positive")
    if min_children == 1:
        raise ValueError("unary vertices give infinitely many trees")
    trees = _shapes(n, min_children, 1)
    return sorted(trees, key=lambda t: (num_vertices(t), to_string(t)))


def _edges_after_leaf(t: Tree, label: int) -> int | None:
    """Count nodes strictly after leaf ``label`` in preorder."""
    order = []

    def walk(s):
        order.append(s)
        if not is_leaf(s):
            for c in s.children:
                walk(c)

    walk(t)
    for pos, s in enumerate(order):
        if is_leaf(s) and s == label:
            return len(order) - pos - 1
    return None


def _substitute(t: Tree, label: int, sub: Tree) -> Tree:
    if is_leaf(t):
        return sub if t == label else t
    return Vertex(tuple(_substitute(c, label, sub) for c in t.children), t.label)


def graft(t1: Tree, i: int, t2: Tree) -> tuple[int, Tree]:
    """Operadic composition ``t1 o_i t2``; returns ``(sign, tree)``.

    The root of ``t2`` is glued to the leaf labeled ``i`` without creating a
    vertex.  Leaves of ``t2`` take labels ``i..i+n2-1`` and the labels of
    ``t1`` above ``i`` shift up by ``n2 - 1``.
    """
    n1 = arity(t1)
    if not 1 <= i <= n1:
        raise IndexError(f"leaf {i} out of range 1..{n1}")
    n2 = arity(t2)
    right = _edges_after_leaf(t1, i)
    if right is None:
        raise IndexError(f"tree has no leaf labeled {i}")
    exponent = (num_edges(t2) - 1) * right
    base = relabel(t1, lambda x: x if x < i else (x + n2 - 1 if x > i else x))
    out = _substitute(base, i, shift(t2, i - 1))
    return (-1 if exponent % 2 else 1), out


def graft_chain(c1: TreeChain, i: int, c2: TreeChain) -> TreeChain:
    out: TreeChain = {}
    for t1, a in c1.items():
        for t2, b in c2.items():
            s, t = graft(t1, i, t2)
            add_term(out, t, s * a * b)
    return out


def add_term(chain: TreeChain, t: Tree, coeff) -> None:
    v = chain.get(t, 0) + coeff
    if v:
        chain[t] = Fraction(v)
    else:
        chain.pop(t, None)


def _expansions(t: Tree, pos: int) -> Iterator[tuple[int, Tree]]:
    """Yield ``(exponent, T')`` with ``T'/e = t`` for subtrees rooted at preorder ``pos``.

    The exponent counts non-root nodes preceding the new vertex in preorder,
    i.e. the edges below and to the left of the new edge.
    """
    if is_leaf(t):
        return
    kids = t.children
    k = len(kids)
    sizes = [num_edges(c) for c in kids]
    # split this vertex: group a contiguous block of >= 2 children, not all
    for start in range(k):
        before = sum(sizes[:start])
        for stop in range(start + 2, k + 1):
            if stop - start == k:
                continue
            new = Vertex(kids[start:stop], t.label)
            yield pos + before, Vertex(kids[:start] + (new,) + kids[stop:], t.label)
    # expand inside a child
    offset = pos + 1
    for idx, c in enumerate(kids):
        for e, sub in _expansions(c, offset):
            yield e, Vertex(kids[:idx] + (sub,) + kids[idx + 1:], t.label)
        offset += sizes[idx]


def tree_differential(c: TreeChain | Tree) -> TreeChain:
    """The A-infinity differential, raising the vertex count by one."""
    if not isinstance(c, dict):
        c = {c: Fraction(1)}
    out: TreeChain = {}
    for t, a in c.items():
        for e, t2 in _expansions(t, 0):
            add_term(out, t2, -a if e % 2 else a)
    return out


def contract_internal_edges(t: Tree) -> Iterator[Tree]:
    """Trees ``T/e`` for each internal edge ``e`` of ``t``."""
    if is_leaf(t):
        return
    kids = t.children
    for idx, c in enumerate(kids):
        if not is_leaf(c):
            yield Vertex(kids[:idx] + c.children + kids[idx + 1:], t.label)
            for sub in contract_internal_edges(c):
                yield Vertex(kids[:idx] + (sub,) + kids[idx + 1:], t.label)


# serialization ------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|(\()|(\))|([^\s()\d]+)(?=\())")


def to_string(t: Tree) -> str:
    """Nested-parenthesis form, e.g. ``(1 (2 3))``; decorations prefix ``(``."""
    if is_leaf(t):
        return str(t)
    return t.label + "(" + " ".join(to_string(c) for c in t.children) + ")"


def parse_tree(s: str) -> Tree:
    """Inverse of :func:`to_string`."""
    pos = 0
    s = s.strip()

    def parse() -> Tree:
        nonlocal pos
        m = _TOKEN.match(s, pos)
        if not m:
            raise ValueError(f"cannot parse tree at offset {pos}: {s!r}")
        pos = m.end()
        if m.group(1):
            return int(m.group(1))
        label = ""
        if m.group(4):
            label = m.group(4)
            m = _TOKEN.match(s, pos)
            if not m or not m.group(2):
                raise ValueError(f"expected '(' after decoration at offset {pos}")
            pos = m.end()
        elif not m.group(2):
            raise ValueError(f"unexpected ')' at offset {pos}")
        kids = []
        while True:
            m = _TOKEN.match(s, pos)
            if m is None:
                raise ValueError(f"unbalanced parentheses in {s!r}")
            if m.group(3):
                pos = m.end()
                break
            kids.append(parse())
        if not kids:
            raise ValueError("empty vertex")
        return Vertex(tuple(kids), label)

    t = parse()
    if s[pos:].strip():
        raise ValueError(f"trailing input: {s[pos:]!r}")
    return t


def chain_to_json(c: TreeChain) -> list:
    return [[to_string(t), str(v)] for t, v in sorted(c.items(), key=lambda kv: to_string(kv[0]))]
