"""Sampled minimum volume covering ellipsoids / D-optimal designs.

Thin wrapper over the C++ core; arrays are NumPy, row indices are 0-based.
"""

from ._core import (
    BoundViolation,
    DegenerateScale,
    DimensionError,
    Error,
    FormatError,
    InvalidArgument,
    LeverageProfile,
    MaxIterations,
    NotFeasible,
    RankDeficient,
    SketchTooSmall,
    ThresholdUnreachable,
    approx_leverage,
    bound_final_gap,
    bound_initial_gap,
    certificate_gap,
    ellipsoid_volume,
    exact_leverage,
    extreme_gen_eigs,
    generate,
    gram,
    load_matrix,
    log_det,
    min_volume_ellipsoid,
    predict_sample_size,
    run_pipeline,
    sample,
    save_matrix,
    scaled_row_leverage,
    solve,
)

__all__ = [name for name in dir() if not name.startswith("_")]
