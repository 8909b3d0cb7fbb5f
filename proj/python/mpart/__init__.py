"""Mass partitions by fans, cones, double wedges and projective cuts."""

from ._core import (
    Instance,
    MassDistribution,
    MpartError,
    SolverConfig,
    feasibility,
    gnomonic_lift,
    gnomonic_project,
    hs_after_transform,
    make_planted_hs_instance,
    make_projective_tight_instance,
    make_random_hs_instance,
    make_simplex_counterexample,
    plot_svg,
    random_instance,
    solve_cone,
    solve_cone_apex_on_line,
    solve_double_wedge,
    solve_fan,
    solve_shared_h1,
    sphere_map_degree,
    stripes,
    verify,
    winding_number,
)

__all__ = [name for name in dir() if not name.startswith("_")]
