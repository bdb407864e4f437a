"""Spherical, arc, tube and horocycle means of functions lifted to the universal
covering tree of a finite graph, with spectral convergence rates."""

from .cover import (
    Arc,
    CoverPath,
    EdgeSphere,
    Horocycle,
    RaySpec,
    Sphere,
    Tube,
    arc_counts,
    edge_sphere_counts,
    enumerate_region,
    horocycle_counts,
    region_counts,
    sphere_counts,
    tube_counts,
)
from .graph import GraphClass, GraphError, Multigraph, classify, edge_degree, line_graph, load_graph, squared_graph
from .means import MeanSeries, bipartite_even_limits, mean_series, radialization, region_mean
from .spectral import (
    SpectralReport,
    analyze,
    beta_edge_regular,
    beta_edge_semiregular,
    beta_vertex_regular,
    check_gap_lemma,
    edge_laplacian,
    is_ramanujan,
    vertex_laplacian,
)
from .verify import certify_bound, cross_check_theorem, fit_rate

__version__ = "0.1.0"
