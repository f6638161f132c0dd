"""SIAC post-processing of DG solutions on uniform periodic meshes."""

from siac.bspline import BSpline, bspline_breakpoints, bspline_eval, bspline_moments
from siac.filter import (
    PostprocessErrors,
    convolution_weights,
    filtered_mass,
    postprocess_errors,
    postprocess_point,
    postprocess_values,
)
from siac.kernel import SIACKernel, build_kernel, kernel_coefficients

__all__ = [
    "BSpline",
    "PostprocessErrors",
    "SIACKernel",
    "bspline_breakpoints",
    "bspline_eval",
    "bspline_moments",
    "build_kernel",
    "convolution_weights",
    "filtered_mass",
    "kernel_coefficients",
    "postprocess_errors",
    "postprocess_point",
    "postprocess_values",
]
