"""Univariate thin-plate-spline interpolation and its error-analysis toolkit.

Interpolation on equispaced knots of [0, 1] with the polyharmonic basis
family, the standard and mixed power functions computed through their direct
quadratic forms, exact piecewise-linear Peano kernels with closed-form norms,
and power-law decay fitting, all driven by a CSV-emitting experiment CLI.
"""

from .basis import BasisParam, basis_eval
from .interpolation import (
    InterpolantCoeffs,
    InterpolationSystem,
    KnotGrid,
    LagrangeWeights,
    SingularSystemError,
    assemble_system,
    evaluate_interpolant,
    lagrange_matrix,
    lagrange_values,
    solve_interpolant,
)
from .peano import (
    MIXED_CUBIC_L2_FACTOR,
    KernelNorms,
    PiecewiseLinearKernel,
    build_kernel,
    integrate_against,
    kernel_norms,
    kernel_profile,
    l1_norm,
    l2_norm,
)
from .power import (
    CancellationError,
    MidpointSweep,
    PowerSample,
    QuadraticFormSpec,
    midpoint_sweep,
    midpoint_sweeps,
    mixed_power,
    power_samples,
    quadratic_form,
    standard_power,
)
from .rates import (
    DecaySeries,
    RateFit,
    fit_power_law,
    fit_prefactor,
    per_h_exponents,
    per_h_exponents_doubling,
)

__version__ = "0.1.0"

__all__ = [
    "BasisParam",
    "CancellationError",
    "DecaySeries",
    "InterpolantCoeffs",
    "InterpolationSystem",
    "KernelNorms",
    "KnotGrid",
    "LagrangeWeights",
    "MIXED_CUBIC_L2_FACTOR",
    "MidpointSweep",
    "PiecewiseLinearKernel",
    "PowerSample",
    "QuadraticFormSpec",
    "RateFit",
    "SingularSystemError",
    "assemble_system",
    "basis_eval",
    "build_kernel",
    "evaluate_interpolant",
    "fit_power_law",
    "fit_prefactor",
    "integrate_against",
    "kernel_norms",
    "kernel_profile",
    "l1_norm",
    "l2_norm",
    "lagrange_matrix",
    "lagrange_values",
    "midpoint_sweep",
    "midpoint_sweeps",
    "mixed_power",
    "per_h_exponents",
    "per_h_exponents_doubling",
    "power_samples",
    "quadratic_form",
    "solve_interpolant",
    "standard_power",
]
