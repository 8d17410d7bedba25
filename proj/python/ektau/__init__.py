"""Surfaces in the homogeneous spaces E(k, tau): geometry, residual suites, congruence tests."""

from ._ektau import (
    ConfigError,
    ConvergenceError,
    ConvexityReport,
    DegenerateSpace,
    DomainError,
    Error,
    FrameUndefined,
    InconsistentData,
    Isometry,
    Space,
    SpaceParams,
    Surface,
    Unsupported,
    analyze,
    congruence_test,
    convexity_report,
    coordinate_sphere,
    find_horizontal_points,
    graph_surface,
    run_suite,
    sincos_roots,
    solve_theta,
    vertical_plane,
)

__all__ = [name for name in dir() if not name.startswith("_")]
