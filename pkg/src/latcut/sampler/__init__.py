"""Polytopes and random-walk estimation of their moments.

The hit-and-run kernel is compiled with Cython when available; otherwise a
numpy implementation with the same inputs and outputs is used.  ``KERNEL_NAME``
records which one was selected.
"""
from . import _walk_py

try:
    from ._walk import hit_and_run as KERNEL
    KERNEL_NAME = "compiled"
except ImportError:  # extension not built
    KERNEL = _walk_py.hit_and_run
    KERNEL_NAME = "python"

from .polytope import AffineSubspace, Polytope, add_halfspace, contains  # noqa: E402
from .walk import (  # noqa: E402
    MomentEstimate,
    affine_hull,
    SamplerConfig,
    bounding_box,
    chebyshev_center,
    default_sample_count,
    estimate_moments,
    estimate_volume,
    interior_start,
    sample,
    sample_local,
)

__all__ = [
    "AffineSubspace", "Polytope", "MomentEstimate", "SamplerConfig", "KERNEL", "KERNEL_NAME",
    "add_halfspace", "contains", "sample", "sample_local", "estimate_moments", "estimate_volume",
    "chebyshev_center", "affine_hull", "interior_start", "bounding_box", "default_sample_count",
]
