"""
Studies built on the driver: convergence tables, CFL sweeps and cost
comparisons between RK3 and the iterative integrators.

Convergence rows are independent and may run concurrently in worker threads;
results are always reported in configuration order. Timing runs are serial.
"""

import asyncio
import logging
import math
from dataclasses import dataclass, replace
from pathlib import Path
from typing import List, Optional, Sequence, Tuple

import numpy as np

from core.context import run_label
from core.utils import BudgetExceeded, DGSiacError, ensure_output_directory
from dgspace.solution import DGSolution, dump_solution, l2_error, l2_project
from harness.driver import IntegrationResult, run_integration, time_step
from harness.problems import Problem
from harness.reporting import (
    row_path,
    write_cfl_sweep_csv,
    write_convergence_csv,
    write_pointwise_csv,
    write_timing_csv,
)
from harness.run_config import RunConfig
from integrators.registry import IntegratorSpec, build_integrator
from numerics.precision import Precision
from siac.filter import PostprocessErrors, postprocess_errors

logger = logging.getLogger(__name__)

STATUS_OK = "ok"
STATUS_SKIPPED = "skipped-precision"
STATUS_FAILED = "failed"


@dataclass
class Simulation:
    """
    A finished run together with its DG and filtered errors.

    Reported errors are root-mean-square over the domain, ‖e‖₂/√|Ω|; on the
    unit interval they equal the plain L2 norm.
    """

    result: IntegrationResult
    raw_dg_l2: float
    postprocessed: PostprocessErrors
    domain_length: float = 1.0

    @property
    def dg_l2(self) -> float:
        return self.raw_dg_l2 / math.sqrt(self.domain_length)

    @property
    def pp_l2(self) -> float:
        return float(self.postprocessed.l2) / math.sqrt(self.domain_length)


def simulate(
    problem: Problem,
    degree: int,
    cells: int,
    cfl: float,
    spec: IntegratorSpec,
    *,
    precision: Precision = Precision.STANDARD,
    final_time: Optional[float] = None,
    budget_seconds: Optional[float] = None,
) -> Simulation:
    """Project the initial data, integrate to T and measure both errors."""
    dtype = precision.dtype
    final_time = problem.final_time if final_time is None else final_time
    mesh = problem.mesh(cells, dtype)
    sol0 = l2_project(problem.initial, mesh, degree, dtype)
    dt = time_step(sol0, cfl, problem.flux, problem.scale_dt_by_wave_speed)
    integrator = build_integrator(spec, degree, dtype, dt=float(dt), dx=mesh.dx)
    result = run_integration(
        sol0,
        final_time,
        cfl,
        integrator,
        problem.flux,
        scale_by_wave_speed=problem.scale_dt_by_wave_speed,
        budget_seconds=budget_seconds,
    )
    exact = problem.exact_at(final_time)
    return Simulation(
        result,
        float(l2_error(result.solution, exact)),
        postprocess_errors(result.solution, exact),
        domain_length=float(mesh.b - mesh.a),
    )


def observed_order(previous: Optional[float], current: Optional[float], previous_cells: int, cells: int) -> Optional[float]:
    """log(e_prev/e)/log(N/N_prev); None when either error is missing or zero."""
    if previous is None or current is None or not previous > 0 or not current > 0:
        return None
    return math.log(previous / current) / math.log(cells / previous_cells)


@dataclass(frozen=True)
class ConvergenceRow:
    degree: int
    cells: int
    dg_l2: Optional[float] = None
    dg_order: Optional[float] = None
    pp_l2: Optional[float] = None
    pp_order: Optional[float] = None
    seconds: Optional[float] = None
    rhs_evals: Optional[int] = None
    status: str = STATUS_OK
    message: str = ""


@dataclass
class ConvergenceReport:
    """Rows in configuration order; orders are filled between successive rows of a degree."""

    rows: List[ConvergenceRow]

    def __post_init__(self):
        self.rows = self._with_orders(self.rows)

    @staticmethod
    def _with_orders(rows: Sequence[ConvergenceRow]) -> List[ConvergenceRow]:
        previous = {}
        filled = []
        for row in rows:
            before = previous.get(row.degree)
            if before is None or row.status != STATUS_OK or before.status != STATUS_OK:
                filled.append(replace(row, dg_order=None, pp_order=None))
            else:
                filled.append(
                    replace(
                        row,
                        dg_order=observed_order(before.dg_l2, row.dg_l2, before.cells, row.cells),
                        pp_order=observed_order(before.pp_l2, row.pp_l2, before.cells, row.cells),
                    )
                )
            previous[row.degree] = row
        return filled

    @property
    def failed(self) -> bool:
        return any(row.status == STATUS_FAILED for row in self.rows)

    def rows_for(self, degree: int) -> List[ConvergenceRow]:
        return [row for row in self.rows if row.degree == degree]

    def row(self, degree: int, cells: int) -> ConvergenceRow:
        for row in self.rows:
            if row.degree == degree and row.cells == cells:
                return row
        raise KeyError((degree, cells))


def _convergence_row(cfg: RunConfig, problem: Problem, degree: int, cells: int) -> ConvergenceRow:
    with run_label(f"p={degree} N={cells}"):
        if cfg.precision is Precision.STANDARD and cfg.needs_extended_precision(degree, cells):
            logger.warning(
                f"Skipped: reference filtered error {cfg.reference_for(degree, cells)[1]:.2e} "
                f"is below double precision; rerun with --precision extended"
            )
            return ConvergenceRow(degree, cells, status=STATUS_SKIPPED)

        try:
            run = simulate(
                problem,
                degree,
                cells,
                cfg.cfl_for(degree),
                cfg.integrator,
                precision=cfg.precision,
                final_time=cfg.time_for(),
            )
        except DGSiacError as e:
            logger.error(f"Row failed: {e}")
            return ConvergenceRow(degree, cells, status=STATUS_FAILED, message=str(e))

        result = run.result
        logger.info(
            f"Row done: dg_l2={run.dg_l2:.3e} pp_l2={run.pp_l2:.3e} "
            f"rhs_evals={result.rhs_evaluations} seconds={result.seconds:.2f}"
        )
        if result.iteration_counts:
            logger.info(f"Mean sweeps per step: {np.mean(result.iteration_counts):.2f}")
        if cfg.pointwise_output:
            errors = run.postprocessed
            write_pointwise_csv(
                errors.x, errors.dg_error, errors.filtered_error, row_path(cfg.pointwise_output, degree, cells)
            )
        return ConvergenceRow(
            degree,
            cells,
            dg_l2=run.dg_l2,
            pp_l2=run.pp_l2,
            seconds=result.seconds if cfg.wallclock else None,
            rhs_evals=result.rhs_evaluations,
        )


async def run_convergence_study_async(cfg: RunConfig) -> ConvergenceReport:
    """
    Compute every (p, N) row with at most cfg.workers rows in flight.

    A row failing with a library error is reported with status 'failed' and
    the remaining rows still run.
    """
    problem = cfg.get_problem()
    semaphore = asyncio.Semaphore(cfg.workers)

    async def run_row(degree: int, cells: int) -> ConvergenceRow:
        async with semaphore:
            return await asyncio.to_thread(_convergence_row, cfg, problem, degree, cells)

    logger.info(
        f"Convergence study: {problem.kind.value}, {cfg.integrator.label}, p={list(cfg.degrees)}, "
        f"N={list(cfg.resolutions)}, precision={cfg.precision.value}, workers={cfg.workers}"
    )
    rows = await asyncio.gather(*(run_row(p, n) for p in cfg.degrees for n in cfg.resolutions))
    report = ConvergenceReport(list(rows))
    if cfg.output:
        ensure_output_directory(str(Path(cfg.output).parent))
        write_convergence_csv(report, cfg.output)
    return report


def run_convergence_study(cfg: RunConfig) -> ConvergenceReport:
    return asyncio.run(run_convergence_study_async(cfg))


@dataclass(frozen=True)
class CflSweepPoint:
    degree: int
    cells: int
    integrator: str
    cfl: float
    dg_l2: float
    pp_l2: float
    seconds: Optional[float]
    rhs_evals: int


def cfl_sweep(
    problem: Problem,
    degree: int,
    cells: int,
    spec: IntegratorSpec,
    cfls: Sequence[float],
    *,
    precision: Precision = Precision.STANDARD,
    final_time: Optional[float] = None,
    wallclock: bool = True,
) -> List[CflSweepPoint]:
    """DG and filtered errors at T for each CFL number, in the given order."""
    points = []
    for cfl in cfls:
        with run_label(f"{spec.label} p={degree} N={cells} cfl={cfl:g}"):
            run = simulate(problem, degree, cells, cfl, spec, precision=precision, final_time=final_time)
            logger.info(f"Sweep point: dg_l2={run.dg_l2:.3e} pp_l2={run.pp_l2:.3e}")
        points.append(
            CflSweepPoint(
                degree,
                cells,
                spec.label,
                cfl,
                run.dg_l2,
                run.pp_l2,
                run.result.seconds if wallclock else None,
                run.result.rhs_evaluations,
            )
        )
    return points


def plateau_onset(cfls: Sequence[float], errors: Sequence[float], rel_tol: float = 0.1) -> float:
    """
    Largest CFL from which every smaller CFL has an error within (1+rel_tol)
    of the error at the smallest CFL.
    """
    if len(cfls) != len(errors) or not cfls:
        raise ValueError("cfls and errors must be non-empty and of equal length")
    pairs = sorted(zip(cfls, errors))
    floor = pairs[0][1]
    onset = pairs[0][0]
    for cfl, error in pairs:
        if error > (1 + rel_tol) * floor:
            break
        onset = cfl
    return onset


def run_cfl_sweep(cfg: RunConfig) -> List[CflSweepPoint]:
    """Sweep every (p, N) of cfg over cfg.cfls and write the CSV."""
    if not cfg.cfls:
        raise DGSiacError("A CFL sweep needs a list of CFL numbers (cfls)")
    problem = cfg.get_problem()
    points: List[CflSweepPoint] = []
    for degree in cfg.degrees:
        for cells in cfg.resolutions:
            sweep = cfl_sweep(
                problem,
                degree,
                cells,
                cfg.integrator,
                cfg.cfls,
                precision=cfg.precision,
                final_time=cfg.time_for(),
                wallclock=cfg.wallclock,
            )
            dg_onset = plateau_onset([p.cfl for p in sweep], [p.dg_l2 for p in sweep])
            pp_onset = plateau_onset([p.cfl for p in sweep], [p.pp_l2 for p in sweep])
            logger.info(f"p={degree} N={cells}: DG plateau from cfl {dg_onset:g}, filtered plateau from cfl {pp_onset:g}")
            points.extend(sweep)
    if cfg.output:
        ensure_output_directory(str(Path(cfg.output).parent))
        write_cfl_sweep_csv(points, cfg.output)
    return points


@dataclass(frozen=True)
class TimingRow:
    degree: int
    cells: int
    rk3_cfl: float
    rk3_seconds: float
    rk3_rhs_evals: int
    rk3_estimated: bool
    sdg_seconds: float
    sdg_rhs_evals: int
    sdc_seconds: float
    sdc_rhs_evals: int
    adaptive_seconds: float
    adaptive_rhs_evals: int

    @property
    def time_ratio(self) -> Optional[float]:
        return self.rk3_seconds / self.sdg_seconds if self.sdg_seconds > 0 else None

    @property
    def evals_ratio(self) -> float:
        return self.rk3_rhs_evals / self.sdg_rhs_evals

    @property
    def sdc_time_ratio(self) -> Optional[float]:
        return self.rk3_seconds / self.sdc_seconds if self.sdc_seconds > 0 else None

    @property
    def sdc_evals_ratio(self) -> float:
        return self.rk3_rhs_evals / self.sdc_rhs_evals


def rk3_accuracy_cfl(degree: int, dx: float) -> float:
    """
    RK3 CFL that keeps the temporal error below the spatial one:
    Δt ~ Δx^{(2p+1)/3}, clipped by the RKDG stability bound 1/(2p+1).
    """
    return min(0.9 / (2 * degree + 1), 0.3 * dx ** ((2 * degree + 1) / 3 - 1))


def _timed(problem: Problem, degree: int, cells: int, cfl: float, spec: IntegratorSpec, precision: Precision,
           final_time: float, budget_seconds: Optional[float] = None) -> Tuple[float, int, bool]:
    """(seconds, rhs evaluations, estimated) of one run; budget overruns are extrapolated."""
    try:
        run = simulate(
            problem, degree, cells, cfl, spec, precision=precision, final_time=final_time, budget_seconds=budget_seconds
        )
    except BudgetExceeded as e:
        per_step = build_integrator(spec, degree, precision.dtype).evaluations_per_step
        seconds = e.elapsed * e.steps_total / e.steps_done
        logger.warning(
            f"{spec.label} estimated from {e.steps_done}/{e.steps_total} steps: ~{seconds:.1f}s"
        )
        return seconds, per_step * e.steps_total, True
    return run.result.seconds, run.result.rhs_evaluations, False


def timing_comparison(
    problem: Problem,
    degrees: Sequence[int],
    cells: int,
    *,
    precision: Precision = Precision.STANDARD,
    budget_seconds: Optional[float] = None,
    final_time: Optional[float] = None,
    cfl: float = 0.1,
) -> List[TimingRow]:
    """
    Cost of reaching spatial-error-dominated accuracy with RK3 versus SDG,
    SDC and adaptive SDG (all K = 2p at the given CFL), serially per degree.
    """
    final_time = problem.final_time if final_time is None else final_time
    dx = problem.mesh(cells).dx
    rows = []
    for degree in degrees:
        with run_label(f"timing p={degree} N={cells}"):
            rk3_cfl = rk3_accuracy_cfl(degree, dx)
            logger.info(f"RK3 at cfl {rk3_cfl:.3e}, iterative integrators at cfl {cfl}")
            rk3 = _timed(problem, degree, cells, rk3_cfl, IntegratorSpec("rk3"), precision, final_time, budget_seconds)
            sdg = _timed(problem, degree, cells, cfl, IntegratorSpec("sdg"), precision, final_time)
            sdc = _timed(problem, degree, cells, cfl, IntegratorSpec("sdc"), precision, final_time)
            adaptive = _timed(problem, degree, cells, cfl, IntegratorSpec("adaptive-sdg"), precision, final_time)
            row = TimingRow(
                degree,
                cells,
                rk3_cfl,
                rk3[0],
                rk3[1],
                rk3[2],
                sdg[0],
                sdg[1],
                sdc[0],
                sdc[1],
                adaptive[0],
                adaptive[1],
            )
            logger.info(f"evals ratio RK3/SDG = {row.evals_ratio:.3g}, RK3/SDC = {row.sdc_evals_ratio:.3g}")
        rows.append(row)
    return rows


def run_timing(cfg: RunConfig) -> List[TimingRow]:
    """Timing comparison for every N of cfg; writes the CSV when cfg.output is set."""
    problem = cfg.get_problem()
    rows: List[TimingRow] = []
    for cells in cfg.resolutions:
        rows.extend(
            timing_comparison(
                problem,
                cfg.degrees,
                cells,
                precision=cfg.precision,
                budget_seconds=cfg.rk3_budget_seconds,
                final_time=cfg.time_for(),
                cfl=cfg.cfl if cfg.cfl is not None else 0.1,
            )
        )
    if cfg.output:
        ensure_output_directory(str(Path(cfg.output).parent))
        write_timing_csv(rows, cfg.output)
    return rows


def dump_final_solution(cfg: RunConfig, degree: int, cells: int, path: str) -> DGSolution:
    """Integrate one configuration to T and write the DG solution to path."""
    problem = cfg.get_problem()
    with run_label(f"p={degree} N={cells}"):
        run = simulate(
            problem, degree, cells, cfg.cfl_for(degree), cfg.integrator, precision=cfg.precision, final_time=cfg.time_for()
        )
        ensure_output_directory(str(Path(path).parent))
        dump_solution(run.result.solution, path)
        logger.info(f"Row done: dg_l2={run.dg_l2:.3e} pp_l2={run.pp_l2:.3e} rhs_evals={run.result.rhs_evaluations} "
                    f"seconds={run.result.seconds:.2f}")
    return run.result.solution
