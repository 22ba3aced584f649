"""Acceptance checks, one per criterion.

Each test prints a single ``criterion N ...: PASS|FAIL`` line.  Run with
``pytest tests/test_acceptance.py -s`` to see the lines inline, or as a
script (``python3 tests/test_acceptance.py``) for just the summary.
"""
import contextlib
import io
import itertools
import json
import math
import random
import sys
import tempfile
import time
from fractions import Fraction
from math import factorial
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).parent))

from test_hoch import ALGEBRAS, m2_algebra, random_cochain  # noqa: E402
from test_kstar import (  # noqa: E402
    X,
    _data,
    random_constant,
    random_poly,
    random_structures,
    sym_alpha,
    to_sympy,
)
from test_ribbon import layers_upto  # noqa: E402
from test_trees import all_trees, d_chain, leibniz_holds  # noqa: E402

# tolerances and budgets fixed by the criteria
SIGMA_FACTOR = 3.0
MAX_FIRST_ORDER_STD = 0.01
MAX_FIRST_ORDER_SAMPLES = 10 ** 6
AINF_SECONDS = 120.0
HOCH_SECONDS = 60.0


def report(number, title, ok, detail):
    line = f"criterion {number} [{title}]: {'PASS' if ok else 'FAIL'} ({detail})"
    print(line, flush=True)
    return line


# 1 ----------------------------------------------------------------------------------

def check_ainf():
    from opergraph.exactla import betti_numbers
    from opergraph.treeop import ainf_component, enumerate_planar_trees
    from opergraph.treeop.trees import arity

    start = time.perf_counter()
    problems = []
    for n in range(2, 7):
        for t in enumerate_planar_trees(n):
            if d_chain(d_chain(t)):
                problems.append(f"d^2 != 0 at n={n}")
                break
        betti = {k: v for k, v in betti_numbers(ainf_component(n)).items() if v}
        if betti != {0: 1}:
            problems.append(f"betti {betti} at n={n}")
    trees = all_trees(5)
    checked = 0
    for t1, t2 in itertools.product(trees, trees):
        n1 = arity(t1)
        if n1 + arity(t2) > 6:
            continue
        for i in range(1, n1 + 1):
            checked += 1
            if not leibniz_holds(t1, i, t2):
                problems.append("Leibniz")
    elapsed = time.perf_counter() - start
    if elapsed > AINF_SECONDS:
        problems.append(f"took {elapsed:.0f}s")
    return not problems, f"{checked} Leibniz cases, {elapsed:.1f}s" + (f"; {problems[:3]}" if problems else "")


# 2 ----------------------------------------------------------------------------------

def check_presentations():
    from opergraph.treeop import free_algebra_dimension, named_presentation, presentation_dimension

    expected = {"assoc": (5, factorial), "lie": (5, lambda n: factorial(n - 1)), "poisson": (4, factorial)}
    bad = []
    for name, (top, formula) in expected.items():
        P = named_presentation(name)
        for n in range(1, top + 1):
            got = presentation_dimension(P, n)
            oracle = free_algebra_dimension(name, n)
            if not got == oracle == formula(n):
                bad.append((name, n, got, oracle))
    return not bad, "assoc/lie n<=5, poisson n<=4 against the free-algebra oracle" + (f"; {bad}" if bad else "")


# 3 ----------------------------------------------------------------------------------

# every stable (g, n) with a graph of at most 6 edges: the one-vertex graphs have 2g - 1 + n edges
KILL_TYPES = [(g, n) for g in range(4) for n in range(1, 8)
              if 6 * g - 6 + 3 * n > 0 and 2 * g - 1 + n <= 6]


def check_ribbon():
    from opergraph.ribbon import (
        canonicalize,
        enumerate_ribbon_graphs,
        graph_differential,
        has_odd_automorphism_bruteforce,
        moduli_homology,
    )

    problems = []
    for g, n in [(g, n) for g in range(3) for n in range(1, 7) if 0 < 6 * g - 6 + 3 * n <= 6]:
        census = enumerate_ribbon_graphs(g, n)
        for gs in census.generators.values():
            for G in gs:
                if graph_differential(graph_differential({G: Fraction(1)})):
                    problems.append(f"d^2 at {(g, n)}")
    graphs = 0
    for g, n in KILL_TYPES:
        for layer in layers_upto(g, n, 6).values():
            for G in layer:
                graphs += 1
                if canonicalize(G).killed != has_odd_automorphism_bruteforce(G):
                    problems.append(f"kill mismatch at {(g, n)}")
    expected = {(0, 3): {3: 1}, (1, 1): {3: 1}, (0, 4): {6: 1, 5: 2}}
    for (g, n), betti in expected.items():
        got = moduli_homology(g, n)
        if got != betti:
            problems.append(f"betti {(g, n)} = {got}")
    return not problems, f"{graphs} graphs with m<=6 over {len(KILL_TYPES)} (g,n) types" + (
        f"; {problems[:3]}" if problems else "")


# 4 ----------------------------------------------------------------------------------

def check_hochschild():
    from opergraph.hoch import (
        associator_expansion,
        deformation_residuals,
        DeformationSeries,
        gerstenhaber_bracket,
        hochschild_cohomology,
        hochschild_differential,
        is_zero,
    )

    start = time.perf_counter()
    problems = []
    rng = random.Random(2024)
    for name, A in ALGEBRAS:
        for n in range(0, 4):
            f = random_cochain(rng, A.dim, n)
            df = hochschild_differential(A, f)
            if not is_zero(hochschild_differential(A, df)):
                problems.append(f"d^2 on {name}")
            if not np.array_equal(df, gerstenhaber_bracket(f, A.product)):
                problems.append(f"df != [f, m0] on {name}")
    triples = 0
    for dim in (2, 3):
        for ar in itertools.product(range(1, 4), repeat=3):
            if sum(ar) - 2 > (5 if dim == 2 else 4):
                continue
            f, g, h = (random_cochain(rng, dim, a) for a in ar)
            p, q, r = (a - 1 for a in ar)
            B = gerstenhaber_bracket
            jac = (-1) ** (p * r) * B(B(f, g), h) + (-1) ** (q * p) * B(B(g, h), f) + (-1) ** (r * q) * B(B(h, f), g)
            triples += 1
            if not is_zero(jac):
                problems.append(f"Jacobi {ar}")
    for name, A in ALGEBRAS[::2]:
        D = DeformationSeries([A.product] + [random_cochain(rng, A.dim, 2) for _ in range(3)])
        for res, assoc in zip(deformation_residuals(D), associator_expansion(D)):
            if not is_zero(res + assoc):
                problems.append(f"residual vs associator on {name}")
    h = hochschild_cohomology(m2_algebra(), 3)
    if h != {0: 1, 1: 0, 2: 0}:
        problems.append(f"H(M2) = {h}")
    elapsed = time.perf_counter() - start
    if elapsed > HOCH_SECONDS:
        problems.append(f"took {elapsed:.0f}s")
    return not problems, f"{len(ALGEBRAS)} algebras, {triples} Jacobi triples, H(M2)={tuple(h.values())}, {elapsed:.1f}s" + (
        f"; {problems[:3]}" if problems else "")


# 5 ----------------------------------------------------------------------------------

def check_kontsevich():
    import sympy

    from opergraph.kstar import (
        AdmissibleGraph,
        ExactWeights,
        MonteCarloWeights,
        Poly,
        PolyPoisson,
        associativity_residual,
        first_order_weights,
        graph_weight,
        moyal_weight_table,
        star_product,
    )

    problems = []
    details = []
    for code, target in (("b1,b2", 0.5), ("b2,b1", -0.5)):
        est = graph_weight(AdmissibleGraph.from_code(code), MAX_FIRST_ORDER_SAMPLES, 12345)
        details.append(f"W({code})={est.mean:.4f}+-{est.std_error:.4f}")
        if est.std_error > MAX_FIRST_ORDER_STD or abs(est.mean - target) > SIGMA_FACTOR * est.std_error:
            problems.append(f"weight {code}")

    rng = random.Random(99)
    W1 = ExactWeights(first_order_weights())
    structures = random_structures()
    for P in structures:
        f, g = random_poly(rng, P.d, 3, 4), random_poly(rng, P.d, 3, 4)
        anti = (star_product(P, f, g, 1, W1).coefficients[1]
                - star_product(P, g, f, 1, W1).coefficients[1]).scale(Fraction(1, 2))
        a, xs = sym_alpha(P), X[: P.d]
        bracket = sum(a[i][j] * sympy.diff(to_sympy(f), xs[i]) * sympy.diff(to_sympy(g), xs[j])
                      for i in range(P.d) for j in range(P.d))
        if sympy.expand(to_sympy(anti) - bracket) != 0:
            problems.append("quasi-classical limit")
    details.append(f"{len(structures)} Poisson structures")

    Wm = ExactWeights(moyal_weight_table(2))
    for d in (2, 3):
        for _ in range(3):
            P = random_constant(rng, d)
            f, g, h = (random_poly(rng, d, 3, 3) for _ in range(3))
            if not associativity_residual(P, f, g, h, 2, Wm).is_zero():
                problems.append("Moyal residual")

    L = PolyPoisson.from_json(_data("linear_poisson.json"))
    worst = 0.0
    for f, g, h in (("x1*x2 + x3", "x2^2 - x1", "x3*x1"), ("x1^2", "x2*x3", "x1 + x3^2"), ("x3", "x1*x2", "x2")):
        f, g, h = (Poly.parse(s, 3) for s in (f, g, h))
        r = associativity_residual(L, f, g, h, 2, MonteCarloWeights(200_000, 7))
        for p, e in zip(r.coefficients, r.errors):
            for mon, c in p.terms.items():
                bound = e.coefficient(mon)
                worst = max(worst, abs(c) / bound if bound else math.inf)
        if not r.within(SIGMA_FACTOR):
            problems.append("linear residual")
    details.append(f"linear residual max |r|/err = {worst:.2f}")
    return not problems, ", ".join(details) + (f"; {problems[:3]}" if problems else "")


# 6 ----------------------------------------------------------------------------------

CLI_RUNS = [
    ["ainf", "--arity", "5"],
    ["trees", "--arity", "5", "--min-children", "2"],
    ["presentation", "--name", "poisson", "--arity", "3"],
    ["ribbon-census", "--genus", "1", "--boundaries", "2"],
    ["moduli-homology", "--genus", "0", "--boundaries", "4"],
    ["hochschild", "--algebra", "m2_algebra", "--max-degree", "2"],
    ["deform-check", "--series", "dual_deformation"],
    ["star", "--poisson", "constant_poisson", "--f", "x1^2", "--g", "x2^2", "--order", "2"],
    ["star", "--poisson", "linear_poisson", "--f", "x1*x2", "--g", "x3^2", "--order", "2",
     "--mc-samples", "50000", "--seed", "11"],
    ["assoc-residual", "--poisson", "linear_poisson", "--f", "x1", "--g", "x2*x3", "--h", "x1*x3",
     "--order", "2", "--mc-samples", "50000", "--seed", "12"],
]


def check_reproducibility():
    from opergraph.cli import run

    problems = []
    with tempfile.TemporaryDirectory() as tmp:
        tmp = Path(tmp)
        for k, argv in enumerate(CLI_RUNS):
            a, b = tmp / f"a{k}", tmp / f"b{k}"
            with contextlib.redirect_stdout(io.StringIO()):
                first = run(["--out", str(a), "--workers", "1", *argv])
                second = run(["--out", str(b), "--workers", "4", "replay", str(a / "manifest.json")]) if first == 0 else None
            if first != 0:
                problems.append(f"{argv[0]} failed")
                continue
            if second != 0:
                problems.append(f"replay of {argv[0]} failed")
                continue
            ma, mb = (json.loads((d / "manifest.json").read_text()) for d in (a, b))
            for name in ma["outputs"]:
                if (a / name).read_bytes() != (b / name).read_bytes():
                    problems.append(f"{name} differs")
            ma.pop("wall_time_seconds")
            mb.pop("wall_time_seconds")
            if ma != mb:
                problems.append(f"manifest of {argv[0]} differs")
    return not problems, f"{len(CLI_RUNS)} runs replayed with a different worker count" + (
        f"; {problems[:3]}" if problems else "")


CRITERIA = [
    (1, "A-infinity suite", check_ainf),
    (2, "presentation suite", check_presentations),
    (3, "ribbon suite", check_ribbon),
    (4, "Hochschild suite", check_hochschild),
    (5, "Kontsevich suite", check_kontsevich),
    (6, "reproducibility", check_reproducibility),
]


def _run(number, capsys=None):
    _, title, fn = CRITERIA[number - 1]
    ok, detail = fn()
    if capsys is not None:
        with capsys.disabled():
            print()
            report(number, title, ok, detail)
    else:
        report(number, title, ok, detail)
    return ok, detail


def test_criterion_1(capsys):
    ok, detail = _run(1, capsys)
    assert ok, detail


def test_criterion_2(capsys):
    ok, detail = _run(2, capsys)
    assert ok, detail


def test_criterion_3(capsys):
    ok, detail = _run(3, capsys)
    assert ok, detail


def test_criterion_4(capsys):
    ok, detail = _run(4, capsys)
    assert ok, detail


def test_criterion_5(capsys):
    ok, detail = _run(5, capsys)
    assert ok, detail


def test_criterion_6(capsys):
    ok, detail = _run(6, capsys)
    assert ok, detail


if __name__ == "__main__":
    results = [_run(n)[0] for n, _, _ in CRITERIA]
    sys.exit(0 if all(results) else 1)
