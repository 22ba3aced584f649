"""Planar trees, the A-infinity operad and operads by generators and relations."""
from .ainf import (
    DegreeError,
    EndOpsTable,
    ainf_basis,
    ainf_component,
    ainf_dims_by_degree,
    check_ainf_relations,
    is_ainf_algebra,
)
from .presentation import (
    OperadPresentation,
    PresentationError,
    free_algebra_dimension,
    named_presentation,
    presentation_dimension,
)
from .trees import (
    Tree,
    TreeChain,
    Vertex,
    corolla,
    degree,
    enumerate_planar_trees,
    graft,
    graft_chain,
    parse_tree,
    to_string,
    tree_differential,
)

__all__ = [
    "DegreeError",
    "EndOpsTable",
    "OperadPresentation",
    "PresentationError",
    "Tree",
    "TreeChain",
    "Vertex",
    "ainf_basis",
    "ainf_component",
    "ainf_dims_by_degree",
    "check_ainf_relations",
    "corolla",
    "degree",
    "enumerate_planar_trees",
    "free_algebra_dimension",
    "graft",
    "graft_chain",
    "is_ainf_algebra",
    "named_presentation",
    "parse_tree",
    "presentation_dimension",
    "to_string",
    "tree_differential",
]
