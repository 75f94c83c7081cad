"""Business logic services."""

from .circumscribe_service import CircumscribeService, disk_akn, regular_akn
from .dowker_service import (
    DowkerService,
    check_alpha_dowker,
    check_weak_alpha_dowker,
    estimate_min_weak_alpha,
    log_convexity_scan,
    regular_tail_bound,
    stability_epsilon0,
    stability_sandwich,
)
from .steinhaus import SteinhausBuilder, steinhaus_example_patch, steinhaus_schedule
from .tiling_service import (
    TilingService,
    boundary_cell_count,
    build_lattice_patch,
    cell_statistic,
    chakerian_gap,
    jittered_voronoi_patch,
    max_isoperimetric_ratio,
    neighbor_counts,
    normality_constants,
    verify_patch,
    window_average,
    window_average_square,
)

__all__ = [
    "CircumscribeService",
    "DowkerService",
    "SteinhausBuilder",
    "TilingService",
    "boundary_cell_count",
    "build_lattice_patch",
    "cell_statistic",
    "chakerian_gap",
    "check_alpha_dowker",
    "check_weak_alpha_dowker",
    "disk_akn",
    "estimate_min_weak_alpha",
    "jittered_voronoi_patch",
    "log_convexity_scan",
    "max_isoperimetric_ratio",
    "neighbor_counts",
    "normality_constants",
    "regular_akn",
    "regular_tail_bound",
    "stability_epsilon0",
    "stability_sandwich",
    "steinhaus_example_patch",
    "steinhaus_schedule",
    "verify_patch",
    "window_average",
    "window_average_square",
]
