"""Modal DG discretization of scalar periodic conservation laws in 1D."""

from dgspace.flux import FluxKind, FluxSpec, burgers, lax_friedrichs, linear_advection, variable_coefficient
from dgspace.mesh import Mesh
from dgspace.operator import SemiDiscreteOperator, max_wave_speed, semidiscrete_rhs
from dgspace.solution import (
    DGSolution,
    dump_solution,
    eval_traces,
    l2_error,
    l2_project,
    load_solution,
    total_mass,
)

__all__ = [
    "DGSolution",
    "FluxKind",
    "FluxSpec",
    "Mesh",
    "SemiDiscreteOperator",
    "burgers",
    "dump_solution",
    "eval_traces",
    "l2_error",
    "l2_project",
    "lax_friedrichs",
    "linear_advection",
    "load_solution",
    "max_wave_speed",
    "semidiscrete_rhs",
    "total_mass",
    "variable_coefficient",
]
