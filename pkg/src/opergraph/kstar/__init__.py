"""Kontsevich's graph expansion: admissible graphs, weights and star products."""
from .graphs import (
    LEFT,
    RIGHT,
    AdmissibleGraph,
    GraphError,
    PoissonError,
    PolyPoisson,
    bidifferential_operator,
    canonical_graph,
    enumerate_admissible_graphs,
)
from .poly import Poly, PolyBudgetError
from .star import (
    ExactWeights,
    MissingWeightError,
    MonteCarloWeights,
    StarSeries,
    associativity_residual,
    star_product,
)
from .weights import (
    WeightEstimate,
    first_order_weights,
    graph_weight,
    load_weight_table,
    moyal_weight_table,
    weight_table_to_json,
)

__all__ = [
    "AdmissibleGraph",
    "ExactWeights",
    "GraphError",
    "LEFT",
    "MissingWeightError",
    "MonteCarloWeights",
    "PoissonError",
    "Poly",
    "PolyBudgetError",
    "PolyPoisson",
    "RIGHT",
    "StarSeries",
    "WeightEstimate",
    "associativity_residual",
    "bidifferential_operator",
    "canonical_graph",
    "enumerate_admissible_graphs",
    "first_order_weights",
    "graph_weight",
    "load_weight_table",
    "moyal_weight_table",
    "star_product",
    "weight_table_to_json",
]
