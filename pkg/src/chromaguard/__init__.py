"""Chromatic guarding for simple and orthogonal polygons."""
from __future__ import annotations

__version__ = "0.1.0"

from .geometry import (  # noqa: E402
    CellDecomposition,
    Location,
    OrthoPolygon,
    PolygonError,
    SimplePolygon,
    classify_vertices,
    cut_edges,
    is_monotone,
    point_in_polygon,
    reflex_vertices,
    refined_grid,
    segment_in_polygon,
    validate_polygon,
)
from .visibility import (  # noqa: E402
    Region,
    WedgeSpec,
    Window,
    ortho_visibility_from_edge,
    rect_visibility,
    visibility_polygon,
    wedge_visibility,
    windows_of,
)
from .decomposition import (  # noqa: E402
    DualityTree,
    MountsPartition,
    Part,
    PathBundle,
    base_edges,
    cutting,
    five_color_parts,
    heavy_path_iterations,
    is_mount,
    is_snake,
    mounts_partition,
    path_to_snake,
    snake_split,
)
from .guards import (  # noqa: E402
    Guard,
    GuardPlan,
    guard_alpha,
    guard_mount_rect,
    guard_ortho_O,
    guard_ortho_rect,
    guard_part,
    guard_snake,
)
from .verify import (  # noqa: E402
    ConflictGraph,
    CoverageReport,
    conflict_graph,
    coverage_report,
    exact_chromatic,
    exact_coloring,
    greedy_color,
    is_proper_coloring,
    oracle_chromatic_guarding,
)
