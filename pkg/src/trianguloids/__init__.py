"""Triangulations of root polytopes of bipartite graphs and their
encoding as trianguloids.

The main entry points are re-exported here; see the submodules for the
full API.
"""
from .compat import is_compatible, is_compatible_oracle, union_digraph
from .graph import (
    BipartiteGraph,
    Subgraph,
    classify,
    complete_graph,
    components,
    degree_vector,
    dual,
    enumerate_spanning_trees,
    new_graph,
    supports,
)
from .lattice import gamma_edges, ij_supports, lambda_edges, points_PG, points_PGminus, points_PGpm
from .search import enumerate_triangulations, enumerate_trianguloids, phi_injectivity
from .triangulation import (
    Triangulation,
    flip,
    is_replaceable,
    lsm_set,
    phi,
    pm_set,
    reconstruct,
    rsm_at,
    rsm_set,
    validate,
)
from .trianguloid import (
    Trianguloid,
    check_axioms,
    decode_coloring,
    encode_coloring,
    from_triangulation,
    label_support,
    to_triangulation,
    tree_of,
)

__version__ = "0.1.0"
