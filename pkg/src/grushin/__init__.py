"""Spectral tools for the Grushin operator ``-Δ_{x'} - |x'|^2 Δ_{x''}``.

The main entry points are re-exported here; see the submodules for the rest.
"""
from ._backend import available as available_backends, backend_name, set_backend, use_backend
from .calculus import (
    SpectralSymbol,
    apply_symbol,
    functional_calculus,
    grushin_fd,
    heat_semigroup,
    psi_eigenfunction,
    sample_psi,
    theta,
)
from .grids import (
    ConfigError,
    DualCoefficients,
    GridFunction,
    GrushinConfig,
    dual_inner,
    dual_norm,
    l2_inner,
    l2_norm,
    sample,
)
from .heat_kernel import (
    HeatKernelQuery,
    KernelWarning,
    heat_kernel,
    kernel_fourier_form,
    kernel_hankel_form,
    kernel_on_grid,
)
from .quadrature import NonConvergenceError
from .special import MultiIndex, bessel_j, hermite_1d, hermite_scaled, mehler_series
from .transforms import TransformPlan, get_plan, grushin_forward, grushin_inverse

__version__ = "0.1.0"

__all__ = [
    "available_backends", "backend_name", "set_backend", "use_backend",
    "SpectralSymbol", "apply_symbol", "functional_calculus", "grushin_fd", "heat_semigroup",
    "psi_eigenfunction", "sample_psi", "theta",
    "ConfigError", "DualCoefficients", "GridFunction", "GrushinConfig",
    "dual_inner", "dual_norm", "l2_inner", "l2_norm", "sample",
    "HeatKernelQuery", "KernelWarning", "heat_kernel", "kernel_fourier_form", "kernel_hankel_form",
    "kernel_on_grid", "NonConvergenceError",
    "MultiIndex", "bessel_j", "hermite_1d", "hermite_scaled", "mehler_series",
    "TransformPlan", "get_plan", "grushin_forward", "grushin_inverse",
]
