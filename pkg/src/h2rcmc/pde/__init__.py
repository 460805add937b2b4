"""Dirichlet problem for constant mean curvature vertical graphs."""

from .domain import DomainError, DomainSpec, GeodesicDisk, Grid, LevelSet, build_grid
from .kernels import KERNEL
from .solver import (GraphSolution, HypothesisWarning, SolverError, boundary_curvature_min,
                     pde_residual, sample_solution, solve_dirichlet, symmetry_deviation,
                     write_diagnostics_json, write_solution_csv)

__all__ = [
    "DomainError", "DomainSpec", "GeodesicDisk", "Grid", "LevelSet", "build_grid", "KERNEL",
    "GraphSolution", "HypothesisWarning", "SolverError", "boundary_curvature_min",
    "pde_residual", "sample_solution", "solve_dirichlet", "symmetry_deviation",
    "write_diagnostics_json", "write_solution_csv",
]
