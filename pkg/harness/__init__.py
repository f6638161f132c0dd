"""Driver, test problems and studies (convergence, CFL sweeps, cost comparison)."""

from harness.driver import IntegrationResult, integrate, run_integration, step_count, time_step
from harness.problems import Problem, ProblemKind, burgers_exact, get_problem
from harness.run_config import RunConfig
from harness.studies import (
    CflSweepPoint,
    ConvergenceReport,
    ConvergenceRow,
    Simulation,
    TimingRow,
    cfl_sweep,
    dump_final_solution,
    plateau_onset,
    rk3_accuracy_cfl,
    run_cfl_sweep,
    run_convergence_study,
    run_convergence_study_async,
    run_timing,
    simulate,
    timing_comparison,
)

__all__ = [
    "CflSweepPoint",
    "ConvergenceReport",
    "ConvergenceRow",
    "IntegrationResult",
    "Problem",
    "ProblemKind",
    "RunConfig",
    "Simulation",
    "TimingRow",
    "burgers_exact",
    "cfl_sweep",
    "dump_final_solution",
    "get_problem",
    "integrate",
    "plateau_onset",
    "rk3_accuracy_cfl",
    "run_cfl_sweep",
    "run_convergence_study",
    "run_convergence_study_async",
    "run_integration",
    "run_timing",
    "simulate",
    "step_count",
    "time_step",
    "timing_comparison",
]
