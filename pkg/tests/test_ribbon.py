import itertools
import random
from fractions import Fraction

import pytest

from opergraph.errors import BudgetError
from opergraph.exactla import betti_numbers, verify_complex
from opergraph.ribbon import (
    RibbonError,
    RibbonGraph,
    automorphisms_bruteforce,
    boundary_components,
    canonicalize,
    contract,
    contract_edge,
    edge_range,
    enumerate_bruteforce,
    enumerate_ribbon_graphs,
    from_cycles,
    genus,
    graph_complex,
    graph_differential,
    has_odd_automorphism_bruteforce,
    moduli_cohomology,
    moduli_homology,
    oriented,
    perm_parity,
)
from opergraph.ribbon import _expand, _one_vertex_graphs

# theta graph: edges a=(0,3), b=(1,4), c=(2,5)
THETA_EDGES = [(0, 3), (1, 4), (2, 5)]


def theta_same():
    return from_cycles([[0, 1, 2], [3, 4, 5]], THETA_EDGES)  # (abc)/(abc)


def theta_reversed():
    return from_cycles([[0, 1, 2], [3, 5, 4]], THETA_EDGES)  # (abc)/(acb)


def figure_eight(interleaved):
    pairs = [(0, 2), (1, 3)] if interleaved else [(0, 1), (2, 3)]
    return from_cycles([[0, 1, 2, 3]], pairs)


def dumbbell():
    # loops (1,2) and (4,5) joined by the bridge (0,3)
    return from_cycles([[0, 1, 2], [3, 4, 5]], [(0, 3), (1, 2), (4, 5)])


def test_theta_boundaries_hand_trace():
    # phi = sigma iota on (abc)/(abc): a1 -> b2 -> c1 -> a2 -> b1 -> c2 -> a1, a single cycle
    G = theta_same()
    G.validate()
    comps = boundary_components(G)
    assert len(comps) == 1 and len(comps[0]) == 6
    assert genus(G) == 1
    H = theta_reversed()
    assert len(boundary_components(H)) == 3
    assert H.euler_characteristic == -1
    assert genus(H) == 0


def test_boundary_cycle_follows_cyclic_order():
    # the tail of the next directed edge is the half-edge after the head of the previous one
    for G in (theta_same(), theta_reversed(), dumbbell(), figure_eight(True)):
        for cyc in boundary_components(G):
            for (t, h), (t2, _) in zip(cyc, cyc[1:] + cyc[:1]):
                assert G.iota[t] == h
                assert G.sigma[h] == t2


def test_figure_eight():
    G = figure_eight(True)
    assert (G.num_vertices, G.num_edges, G.num_boundaries, genus(G)) == (1, 2, 1, 1)
    H = figure_eight(False)
    assert (H.num_boundaries, genus(H)) == (3, 0)
    for F in (G, H):
        assert graph_differential(oriented(F)) == {}  # both edges are loops


def test_dumbbell():
    G = dumbbell()
    assert (G.num_boundaries, genus(G)) == (3, 0)


def test_contract_dumbbell_bridge():
    G = dumbbell()
    k = G.edges.index((0, 3))
    H = contract(G, k)
    assert H.num_vertices == 1 and H.num_edges == 2
    assert (H.num_boundaries, genus(H)) == (3, 0)
    # the two loops stay unlinked: a non-interleaved figure-eight for some boundary labeling
    targets = {canonicalize(from_cycles([[0, 1, 2, 3]], [(0, 1), (2, 3)], order)).graph
               for order in itertools.permutations((1, 2, 3))}
    assert canonicalize(H).graph in targets


def test_contract_genus_one_theta():
    G = theta_same()
    target = canonicalize(figure_eight(True)).graph
    for k in range(3):
        H = contract(G, k)
        assert (H.num_boundaries, genus(H)) == (1, 1)
        assert canonicalize(H).graph == target


def test_contraction_preserves_type():
    for g, n in ((0, 3), (0, 4), (1, 2)):
        census = enumerate_ribbon_graphs(g, n)
        for m, gs in census.generators.items():
            for G in gs:
                for k in range(G.num_edges):
                    if G.is_loop(k):
                        with pytest.raises(RibbonError):
                            contract(G, k)
                        continue
                    H = contract(G, k)
                    H.validate()
                    assert (genus(H), H.num_boundaries, H.num_edges) == (g, n, m - 1)


def test_validation():
    with pytest.raises(RibbonError):
        from_cycles([[0, 1]], [(0, 1)]).validate()  # valence 2
    with pytest.raises(RibbonError):
        # two disjoint figure-eights
        RibbonGraph((1, 2, 3, 0, 5, 6, 7, 4), (2, 3, 0, 1, 6, 7, 4, 5), (1,) * 8).validate()
    G = theta_reversed()
    bad = RibbonGraph(G.sigma, G.iota, (1,) * 6)
    with pytest.raises(RibbonError):
        bad.validate()


def test_json_round_trip():
    for G in (theta_same(), theta_reversed(), dumbbell(), figure_eight(True)):
        assert RibbonGraph.from_json(G.to_json()) == G


def relabel(G, p):
    """Conjugate by the half-edge bijection ``p``."""
    n2 = len(p)
    inv = [0] * n2
    for i, x in enumerate(p):
        inv[x] = i
    sigma = tuple(p[G.sigma[inv[k]]] for k in range(n2))
    iota = tuple(p[G.iota[inv[k]]] for k in range(n2))
    labels = tuple(G.labels[inv[k]] for k in range(n2))
    return RibbonGraph(sigma, iota, labels)


def edge_map_parity(G, H, p):
    hidx = H.edge_index()
    return perm_parity([hidx[p[a]] for a, _ in G.edges])


def test_canonicalization_idempotent_and_invariant():
    rng = random.Random(5)
    census = enumerate_ribbon_graphs(0, 4)
    graphs = [G for gs in census.generators.values() for G in gs]
    graphs += [G for gs in census.killed.values() for G in gs]
    for G in rng.sample(graphs, 60):
        c = canonicalize(G)
        assert c.graph == G  # enumerator output is canonical
        assert canonicalize(c.graph).graph == c.graph
        for _ in range(3):
            p = list(range(len(G.sigma)))
            rng.shuffle(p)
            H = relabel(G, p)
            ch = canonicalize(H)
            assert ch.graph == c.graph
            assert ch.killed == c.killed
            if not c.killed:
                flip = -1 if edge_map_parity(G, H, p) else 1
                assert ch.sign == c.sign * flip


def layers_upto(g, n, mmax):
    ms = edge_range(g, n)
    out = {ms[0]: _one_vertex_graphs(g, n)}
    for m in ms[1:]:
        if m > mmax:
            break
        out[m] = {canonicalize(H).graph for G in out[m - 1] for H in _expand(G)}
    return out


@pytest.mark.parametrize("g,n", [(0, 3), (1, 1), (0, 4), (1, 2), (2, 1), (1, 3), (0, 5)])
def test_kill_decisions_match_bruteforce(g, n):
    for graphs in layers_upto(g, n, 6).values():
        for G in graphs:
            c = canonicalize(G)
            assert c.killed == has_odd_automorphism_bruteforce(G)
            assert c.automorphisms == len(automorphisms_bruteforce(G))


@pytest.mark.slow
def test_kill_decisions_match_bruteforce_06():
    for graphs in layers_upto(0, 6, 6).values():
        for G in graphs:
            assert canonicalize(G).killed == has_odd_automorphism_bruteforce(G)


@pytest.mark.parametrize("g,n,m", [(0, 3, 2), (0, 3, 3), (1, 1, 2), (1, 1, 3), (0, 4, 3),
                                   (0, 4, 4), (0, 4, 5), (1, 2, 3), (1, 2, 4), (1, 2, 5), (2, 1, 4)])
def test_expansion_matches_bruteforce_enumeration(g, n, m):
    census = enumerate_ribbon_graphs(g, n) if 6 * g - 6 + 3 * n <= 6 else None
    if census is None:
        ours = layers_upto(g, n, m)[m]
    else:
        ours = set(census.generators[m]) | set(census.killed[m])
    assert ours == enumerate_bruteforce(g, n, m)


def test_one_one_census():
    census = enumerate_ribbon_graphs(1, 1)
    assert sorted(census.generators) == [2, 3]
    # the interleaved figure-eight has an odd automorphism (rotation by one step swaps the loops)
    assert [len(census.generators[m]) for m in (2, 3)] == [0, 1]
    assert [len(census.killed[m]) for m in (2, 3)] == [1, 0]


def test_handshake_bound():
    for g, n in ((0, 4), (1, 2)):
        for m, gs in enumerate_ribbon_graphs(g, n).generators.items():
            for G in gs:
                assert G.num_vertices <= 2 * m // 3
                assert all(len(c) >= 3 for c in G.vertex_cycles)
                assert (G.euler_characteristic + G.num_boundaries) % 2 == 0


@pytest.mark.parametrize("g,n", [(0, 3), (1, 1), (0, 4), (1, 2)])
def test_d_squared_exhaustive(g, n):
    census = enumerate_ribbon_graphs(g, n)
    for gs in census.generators.values():
        for G in gs:
            assert graph_differential(graph_differential({G: Fraction(1)})) == {}
    assert verify_complex(graph_complex(census)).ok


def test_differential_is_relabeling_equivariant():
    # d of a relabeled copy, brought to canonical form, is the same chain up to the orientation sign
    rng = random.Random(9)
    census = enumerate_ribbon_graphs(0, 4)
    for G in census.generators[5] + census.generators[6]:
        d = graph_differential({G: Fraction(1)})
        for k in range(G.num_edges):
            if not G.is_loop(k):
                s, H = contract_edge(G, k)
                assert s in (-1, 0, 1) and (s == 0) == (H is None)
        p = list(range(len(G.sigma)))
        rng.shuffle(p)
        R = relabel(G, p)
        sign = -1 if edge_map_parity(G, R, p) else 1
        chain = {}
        for k in range(R.num_edges):
            if R.is_loop(k):
                continue
            c = canonicalize(contract(R, k))
            if c.killed:
                continue
            # orientation of R/e: R's edge order with edge k moved last, transported by c.sign
            v = chain.get(c.graph, 0) + (-1) ** (R.num_edges - 1 - k) * c.sign
            chain[c.graph] = v
        chain = {H: v for H, v in chain.items() if v}
        assert chain == {H: sign * v for H, v in d.items()}


def sphere_poincare(n):
    """Betti numbers of M_{0,n}: coefficients of prod_{k=2}^{n-2} (1 + k t)."""
    coeffs = [1]
    for k in range(2, n - 1):
        coeffs = [a + k * b for a, b in zip(coeffs + [0], [0] + coeffs)]
    return {i: c for i, c in enumerate(coeffs) if c}


@pytest.mark.parametrize("g,n,expected", [(0, 3, {3: 1}), (1, 1, {3: 1}), (0, 4, {5: 2, 6: 1}),
                                          (1, 2, {6: 1})])
def test_moduli_homology(g, n, expected):
    assert moduli_homology(g, n) == expected


@pytest.mark.parametrize("n", [3, 4])
def test_genus_zero_matches_classical_cohomology(n):
    assert moduli_cohomology(0, n) == sphere_poincare(n)


def test_euler_characteristic_two_ways():
    for g, n in ((0, 3), (1, 1), (0, 4), (1, 2)):
        census = enumerate_ribbon_graphs(g, n)
        cx = graph_complex(census)
        counts = sum((-1) ** m * len(gs) for m, gs in census.generators.items())
        betti = betti_numbers(cx)
        assert counts == cx.euler_characteristic() == sum((-1) ** m * b for m, b in betti.items())


def test_census_csv():
    text = enumerate_ribbon_graphs(1, 1).to_csv()
    assert text.splitlines() == ["g,n,m,generator_count,killed_count", "1,1,2,0,1", "1,1,3,1,0"]


def test_unstable_and_budget():
    with pytest.raises(RibbonError):
        enumerate_ribbon_graphs(0, 2)
    with pytest.raises(RibbonError):
        enumerate_ribbon_graphs(1, 0)
    with pytest.raises(BudgetError):
        moduli_homology(2, 2)


@pytest.mark.slow
def test_moduli_homology_zero_five():
    assert moduli_cohomology(0, 5) == sphere_poincare(5)


@pytest.mark.slow
@pytest.mark.parametrize("g,n", [(2, 1), (1, 3)])
def test_moduli_homology_connected(g, n):
    # M_{g,n} is connected, so H^0 = Q sits at the top edge count
    betti = moduli_homology(g, n)
    assert betti[6 * g - 6 + 3 * n] == 1
    assert all(m in edge_range(g, n) for m in betti)
