"""Constrained Laplacian spectra on the circle, the square torus and round spheres."""

from .fourier import (
    Fourier1,
    Fourier2,
    derivative,
    dirichlet_energy,
    evaluate,
    inner_product,
    min_on_grid,
    parse_function,
    positivity,
    project_sampled,
)
from .linalg import constraint_complement_basis, symmetric_eigen
from .spectrum import (
    FSpectrum,
    GalerkinProblem,
    SpectrumResult,
    assemble,
    euler_lagrange_residual,
    f_spectrum,
    laplace_spectrum,
    rayleigh,
    rayleigh_min_oracle,
)

__version__ = "0.1.0"

__all__ = [
    "FSpectrum",
    "Fourier1",
    "Fourier2",
    "GalerkinProblem",
    "SpectrumResult",
    "assemble",
    "constraint_complement_basis",
    "derivative",
    "dirichlet_energy",
    "euler_lagrange_residual",
    "evaluate",
    "f_spectrum",
    "inner_product",
    "laplace_spectrum",
    "min_on_grid",
    "parse_function",
    "positivity",
    "project_sampled",
    "rayleigh",
    "rayleigh_min_oracle",
    "symmetric_eigen",
]
