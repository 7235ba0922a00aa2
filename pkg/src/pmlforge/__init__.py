"""Optimal discrete absorbing layers for the half-space wave equation."""

from .balance_optimizer import BalanceReport, conjecture_probe, design_balanced
from .composite_layer import LayerDesign, SpectralWindow, assemble_full_grid, build_composite
from .errors import (
    BreakdownError,
    ConvergenceError,
    DegenerateError,
    DegreeError,
    PMLForgeError,
    PoleError,
)
from .grid_synthesis import FDGrid, FEMesh, fd_to_fe, fe_to_fd, grid_to_rational, rational_to_grid
from .poly_rational import OddEvenRational, Polynomial, newman_ntd, reflection
from .wave_maps import halfspace_error_sweep
from .zolotarev import Segment, equioscillation_check, solve, solve_imaginary, solve_real

__version__ = "0.1.0"

__all__ = [
    "BalanceReport", "BreakdownError", "ConvergenceError", "DegenerateError", "DegreeError",
    "FDGrid", "FEMesh", "LayerDesign", "OddEvenRational", "PMLForgeError", "PoleError",
    "Polynomial", "Segment", "SpectralWindow", "assemble_full_grid", "build_composite",
    "conjecture_probe", "design_balanced", "equioscillation_check", "fd_to_fe", "fe_to_fd",
    "grid_to_rational", "halfspace_error_sweep", "newman_ntd", "rational_to_grid", "reflection",
    "solve", "solve_imaginary", "solve_real",
]
