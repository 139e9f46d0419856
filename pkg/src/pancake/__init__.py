"""Discrete pancake cuts, recursive-bisection districting, metric zones and
cylindrical map projections."""

from .districting import (
    BisectionTree,
    CellAdjacencyGraph,
    DistrictPlan,
    Strategy,
    analytic_bound,
    audit_plan,
    build_adjacency,
    contiguous_min_depth,
    count_outcomes,
    enumerate_outcomes,
    group_cells,
    group_sizes,
    recursive_bisect,
)
from .geometry import (
    GeometryError,
    Line2,
    MetricKind,
    Point2,
    Side,
    SimplePolygon,
    clip_polygon,
    distance,
    polygon_area,
    side_of,
    split_polygon,
    zone_contains,
)
from .hamsandwich import (
    CutSearchError,
    OrientedCut,
    PopulationPoint,
    SizeCapError,
    find_cut,
    make_points,
    oracle_find_all_cuts,
    verify_cut,
)
from .projections import (
    GeoPoint,
    ProjectionKind,
    distortion_report,
    project,
    region_map_area,
    spherical_polygon_area,
    spherical_triangle_angle_sum,
)

__version__ = "0.1.0"

