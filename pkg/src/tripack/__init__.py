"""Triangle packings in randomly perturbed graphs.

Library layout:

- graphs:     bitset graphs, triangles, partitions, edge-list IO
- generators: seeded graph families (regular, bipartite, extremal, G(n,p))
- weighting:  exact triangle/clique weighting formulas and their identities
- packing:    fractional and integral triangle packers
- bounds:     threshold arithmetic and the bipartite obstruction bound
- harness:    seeded sweeps, verification batches, CSV emission
"""

from .graphs import Graph, Triangle, VertexPartition, density, induced_edge_count, triangles_containing, union
from .weighting import WeightedCompleteGraph, clique_weight, triangle_weight, verify_edge_sum

__all__ = [
    "Graph", "Triangle", "VertexPartition", "density", "induced_edge_count",
    "triangles_containing", "union",
    "WeightedCompleteGraph", "clique_weight", "triangle_weight", "verify_edge_sum",
]

__version__ = "0.1.0"
