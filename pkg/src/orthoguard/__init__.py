"""Guard-set solvers for orthogonal polygons under orthogonal visibility.

The pipeline: validate a polygon (geom), subdivide it into pixels
(pixelate), reduce the guarding question to reachability-cover on a
directed auxiliary graph (models), and solve that either by dynamic
programming over a tree decomposition (twd + solver) or by an exact
brute-force baseline used for cross-validation.
"""

from .geom import (
    SCALE,
    OrthoPolygon,
    Point,
    Ring,
    Segment,
    contains_point,
    reflex_vertices,
    validate_polygon,
)
from .pixelate import (
    Pixelation,
    locate,
    one_refinement,
    pixelation_graph,
    standard_pixelation,
)
from .twd import (
    Graph,
    NiceDecomposition,
    TreeDecomposition,
    decompose,
    exact_treewidth,
    make_nice,
    refine_decomposition,
    validate_decomposition,
)
from .models import (
    GuardGraph,
    GuardSpec,
    Model,
    build_directional,
    build_l1_graph,
    build_periscope_graph,
    build_s_graph,
    build_sliding_graph,
    enumerate_maximal_segments,
    guard_graph_decomposition,
    reduce_instance,
    shift_point,
)
from .georacle import GeoOracle, oracle_geo_reachable
from .solver import (
    CoverSolution,
    build_guard_graph,
    greedy_cover,
    solve_dp,
    solve_dp_bounded,
    solve_instance,
    solve_oracle,
    verify_cover,
)

__all__ = [name for name in dir() if not name.startswith("_")]
