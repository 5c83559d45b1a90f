"""Exact linear algebra and model theory of bilinear spaces."""

from ._bilin import (
    BilinError,
    Field,
    Formula,
    Space,
    amalgamate,
    amalgamate3,
    canonical_scalar,
    cli,
    closure,
    demo_hausdorff,
    demo_hilbert,
    demo_qe_refuter,
    demo_stationarity,
    enumerate_types,
    evaluate,
    forced_value,
    instability,
    is_independent,
    isolating_formula,
    local_base,
    qe,
    qf_linear_independence,
    semi_hausdorff_formula,
    theta,
    type_key,
)

__all__ = [name for name in dir() if not name.startswith("_")]
