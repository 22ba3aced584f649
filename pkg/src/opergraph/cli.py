"""Command-line frontend.

Every subcommand writes its result (JSON, or CSV for censuses) and a
``manifest.json`` into ``--out``.  Files are written to temporaries and
renamed only after the whole computation succeeded.  ``replay MANIFEST``
reruns a recorded invocation.

Exit codes: 0 success, 1 invalid input, 2 budget exceeded.
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import tempfile
import time
from importlib.resources import files
from pathlib import Path

from . import __version__
from .errors import BudgetError

log = logging.getLogger("opergraph")

EXIT_OK, EXIT_INVALID, EXIT_BUDGET = 0, 1, 2
RUNTIME_OPTIONS = ("out", "workers", "func", "command")


class UsageError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _resolve(name: str) -> Path:
    """A file path, or the stem of a shipped example in ``opergraph/data``."""
    p = Path(name)
    if p.exists():
        return p
    shipped = files("opergraph") / "data" / f"{name}.json"
    if shipped.is_file():
        return Path(str(shipped))
    raise FileNotFoundError(f"no such file or shipped example: {name}")


def _load_json(name: str):
    path = _resolve(name)
    try:
        return json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise ValueError(f"{path}: malformed JSON ({exc})") from None


def _betti_json(betti: dict) -> dict:
    return {str(k): v for k, v in sorted(betti.items()) if v}


# subcommands ---------------------------------------------------------------------

def cmd_ainf(args):
    from .exactla import betti_numbers, verify_complex
    from .treeop import ainf_component, ainf_dims_by_degree

    comp = ainf_component(args.arity)
    check = verify_complex(comp)
    betti = betti_numbers(comp)
    dims = ainf_dims_by_degree(args.arity)
    low = 2 - args.arity
    return "json", {
        "arity": args.arity,
        "dims": dims,
        "dims_by_degree": {str(low + i): d for i, d in enumerate(dims)},
        "betti": _betti_json({-k: b for k, b in betti.items()}),
        "d_squared_zero": check.ok,
    }


def cmd_trees(args):
    from .treeop import degree, enumerate_planar_trees, to_string

    trees = enumerate_planar_trees(args.arity, args.min_children)
    return "json", {
        "arity": args.arity,
        "min_children": args.min_children,
        "count": len(trees),
        "trees": [{"tree": to_string(t), "degree": degree(t)} for t in trees],
    }


def cmd_presentation(args):
    from .treeop import free_algebra_dimension, named_presentation, presentation_dimension

    P = named_presentation(args.name)
    return "json", {
        "name": P.name,
        "arity": args.arity,
        "dimension": presentation_dimension(P, args.arity),
        "free_algebra_dimension": free_algebra_dimension(P.name, args.arity),
    }


def cmd_ribbon_census(args):
    from .ribbon import enumerate_ribbon_graphs

    return "csv", enumerate_ribbon_graphs(args.genus, args.boundaries).to_csv()


def cmd_moduli_homology(args):
    from .ribbon import moduli_homology

    return "json", _betti_json(moduli_homology(args.genus, args.boundaries))


def cmd_hochschild(args):
    from .hoch import AlgebraTable, hochschild_cohomology, verify_associative

    if args.max_degree < 0:
        raise ValueError("--max-degree must be nonnegative")
    A = AlgebraTable.from_json(_load_json(args.algebra))
    if not verify_associative(A):
        raise ValueError("the algebra is not associative")
    if not A.check_unit():
        raise ValueError("the declared unit is not a two-sided unit")
    dims = hochschild_cohomology(A, args.max_degree + 1)
    return "json", {"dim": A.dim, "cohomology": {str(n): d for n, d in dims.items()}}


def cmd_deform_check(args):
    from .hoch import DeformationSeries, associator_expansion, cochain_to_json, deformation_residuals, is_zero

    D = DeformationSeries.from_json(_load_json(args.series))
    res = deformation_residuals(D)
    assoc = associator_expansion(D)
    return "json", {
        "order": D.order,
        "residuals": [cochain_to_json(r) for r in res],
        "vanishing": [is_zero(r) for r in res],
        "is_deformation": all(is_zero(r) for r in res),
        "matches_associator": all(is_zero(r + a) for r, a in zip(res, assoc)),
    }


def _weights(args):
    from .kstar import ExactWeights, MonteCarloWeights, load_weight_table

    if args.weights and args.mc_samples:
        raise UsageError("--weights and --mc-samples are mutually exclusive")
    if args.mc_samples:
        if args.seed is None:
            raise UsageError("--mc-samples needs --seed")
        return MonteCarloWeights(args.mc_samples, args.seed, args.workers)
    return ExactWeights(load_weight_table(_resolve(args.weights or "moyal_weights")))


def _series_json(S, extra: dict) -> dict:
    out = S.to_json()
    out["coefficients_text"] = [str(p) for p in S.coefficients]
    out.update(extra)
    return out


def cmd_star(args):
    from .kstar import Poly, PolyPoisson, star_product

    P = PolyPoisson.from_json(_load_json(args.poisson))
    f, g = Poly.parse(args.f, P.d), Poly.parse(args.g, P.d)
    S = star_product(P, f, g, args.order, _weights(args))
    return "json", _series_json(S, {"f": str(f), "g": str(g), "order": args.order})


def cmd_assoc_residual(args):
    from .kstar import Poly, PolyPoisson, associativity_residual

    P = PolyPoisson.from_json(_load_json(args.poisson))
    f, g, h = (Poly.parse(s, P.d) for s in (args.f, args.g, args.h))
    S = associativity_residual(P, f, g, h, args.order, _weights(args))
    extra = {"f": str(f), "g": str(g), "h": str(h), "order": args.order, "is_zero": S.is_zero()}
    if S.errors is not None:
        extra["within_3_sigma"] = S.within(3.0)
    return "json", _series_json(S, extra)


# parser -------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="opergraph", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("--out", default=".", help="output directory (default: current directory)")
    parser.add_argument("--workers", type=int, default=None,
                        help="parallel workers for sampling (default: $OPERGRAPH_WORKERS or all cores)")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", metavar="SUBCOMMAND", parser_class=_Parser)

    p = sub.add_parser("ainf", help="A-infinity complex dimensions and Betti numbers")
    p.add_argument("--arity", type=int, required=True)
    p.set_defaults(func=cmd_ainf)

    p = sub.add_parser("trees", help="planar trees with the standard leaf order")
    p.add_argument("--arity", type=int, required=True)
    p.add_argument("--min-children", type=int, default=2)
    p.set_defaults(func=cmd_trees)

    p = sub.add_parser("presentation", help="dimension of a named operad presentation")
    p.add_argument("--name", choices=["assoc", "lie", "poisson"], required=True)
    p.add_argument("--arity", type=int, required=True)
    p.set_defaults(func=cmd_presentation)

    for name, func, helptext in (
        ("ribbon-census", cmd_ribbon_census, "ribbon graph counts per edge number (CSV)"),
        ("moduli-homology", cmd_moduli_homology, "Betti numbers of the ribbon graph complex"),
    ):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("--genus", type=int, required=True)
        p.add_argument("--boundaries", type=int, required=True)
        p.set_defaults(func=func)

    p = sub.add_parser("hochschild", help="Hochschild cohomology dimensions of an algebra")
    p.add_argument("--algebra", required=True, help="JSON file or shipped example name")
    p.add_argument("--max-degree", type=int, required=True)
    p.set_defaults(func=cmd_hochschild)

    p = sub.add_parser("deform-check", help="Maurer-Cartan residuals of a truncated deformation")
    p.add_argument("--series", required=True, help="JSON file or shipped example name")
    p.set_defaults(func=cmd_deform_check)

    for name, func, helptext, three in (
        ("star", cmd_star, "truncated star product f * g", False),
        ("assoc-residual", cmd_assoc_residual, "(f * g) * h - f * (g * h)", True),
    ):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("--poisson", required=True, help="JSON file or shipped example name")
        p.add_argument("--f", required=True)
        p.add_argument("--g", required=True)
        if three:
            p.add_argument("--h", required=True)
        p.add_argument("--order", type=int, required=True)
        p.add_argument("--weights", default=None,
                       help="exact weight table (default: the shipped Moyal table)")
        p.add_argument("--mc-samples", type=int, default=None)
        p.add_argument("--seed", type=int, default=None)
        p.set_defaults(func=func)

    p = sub.add_parser("replay", help="rerun the invocation recorded in a manifest")
    p.add_argument("manifest")
    p.set_defaults(func=None)
    return parser


def _argv_from_manifest(path: str) -> list[str]:
    data = json.loads(Path(path).read_text())
    argv = [data["subcommand"]]
    for key, value in sorted(data["parameters"].items()):
        if value is None:
            continue
        argv += ["--" + key.replace("_", "-"), str(value)]
    return argv


def _write_atomic(outdir: Path, files_: dict[str, str]) -> None:
    outdir.mkdir(parents=True, exist_ok=True)
    staged = []
    try:
        for name, text in files_.items():
            fd, tmp = tempfile.mkstemp(dir=outdir, prefix=f".{name}.", suffix=".tmp")
            with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(text)
            staged.append((tmp, outdir / name))
        for tmp, final in staged:
            os.replace(tmp, final)
    finally:
        for tmp, _ in staged:
            if os.path.exists(tmp):
                os.unlink(tmp)


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "replay":
            out, workers = args.out, args.workers
            args = parser.parse_args(_argv_from_manifest(args.manifest))
            args.out, args.workers = out, workers
        if args.command is None:
            raise UsageError("no subcommand given; see --help")
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_INVALID
    except (OSError, ValueError, KeyError) as exc:
        print(f"invalid manifest: {exc}", file=sys.stderr)
        return EXIT_INVALID

    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    if args.workers is not None and args.workers < 1:
        print("--workers must be positive", file=sys.stderr)
        return EXIT_INVALID

    start = time.perf_counter()
    try:
        kind, result = args.func(args)
    except BudgetError as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_INVALID
    except (ValueError, KeyError, OSError) as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID
    elapsed = time.perf_counter() - start

    params = {k: v for k, v in vars(args).items() if k not in RUNTIME_OPTIONS and k != "verbose"}
    name = f"{args.command}.{kind}"
    text = result if kind == "csv" else _dump(result)
    manifest = {
        "subcommand": args.command,
        "parameters": params,
        "seed": params.get("seed"),
        "version": __version__,
        "wall_time_seconds": round(elapsed, 6),
        "outputs": [name],
    }
    _write_atomic(Path(args.out), {name: text, "manifest.json": _dump(manifest)})
    sys.stdout.write(text)
    return EXIT_OK


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
