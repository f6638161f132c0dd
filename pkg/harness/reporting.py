"""
CSV emission for study results.

Every writer puts a header row naming the columns first. Floats use six
significant digits in scientific notation; absent values are empty cells.
"""

import csv
import logging
import os
from pathlib import Path
from typing import Iterable, List, Optional, Sequence, Union

import numpy as np

logger = logging.getLogger(__name__)

CONVERGENCE_COLUMNS = ["degree", "N", "dg_l2", "dg_order", "pp_l2", "pp_order", "seconds", "rhs_evals", "status"]
CFL_SWEEP_COLUMNS = ["degree", "N", "integrator", "cfl", "dg_l2", "pp_l2", "seconds", "rhs_evals"]
TIMING_COLUMNS = [
    "degree",
    "N",
    "rk3_cfl",
    "rk3_seconds",
    "rk3_rhs_evals",
    "rk3_estimated",
    "sdg_seconds",
    "sdg_rhs_evals",
    "sdc_seconds",
    "sdc_rhs_evals",
    "adaptive_seconds",
    "adaptive_rhs_evals",
    "time_ratio",
    "evals_ratio",
    "sdc_time_ratio",
    "sdc_evals_ratio",
]
POINTWISE_COLUMNS = ["x", "dg_error", "filtered_error"]


def format_float(value: Optional[float]) -> str:
    if value is None:
        return ""
    return f"{float(value):.6e}"


def format_seconds(value: Optional[float]) -> str:
    if value is None:
        return ""
    return f"{float(value):.3f}"


def _write(path: Union[str, Path], columns: Sequence[str], rows: Iterable[Sequence[str]]) -> Path:
    target = Path(path)
    if target.parent and not target.parent.exists():
        os.makedirs(target.parent, exist_ok=True)
    count = 0
    with open(target, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow(row)
            count += 1
    logger.info(f"Wrote {count} rows to {target}")
    return target


def write_convergence_csv(report, path: Union[str, Path]) -> Path:
    rows: List[List[str]] = []
    for row in report.rows:
        rows.append(
            [
                str(row.degree),
                str(row.cells),
                format_float(row.dg_l2),
                format_float(row.dg_order),
                format_float(row.pp_l2),
                format_float(row.pp_order),
                format_seconds(row.seconds),
                "" if row.rhs_evals is None else str(row.rhs_evals),
                row.status,
            ]
        )
    return _write(path, CONVERGENCE_COLUMNS, rows)


def write_cfl_sweep_csv(points, path: Union[str, Path]) -> Path:
    rows = [
        [
            str(point.degree),
            str(point.cells),
            point.integrator,
            format_float(point.cfl),
            format_float(point.dg_l2),
            format_float(point.pp_l2),
            format_seconds(point.seconds),
            str(point.rhs_evals),
        ]
        for point in points
    ]
    return _write(path, CFL_SWEEP_COLUMNS, rows)


def write_timing_csv(rows_in, path: Union[str, Path]) -> Path:
    rows = [
        [
            str(row.degree),
            str(row.cells),
            format_float(row.rk3_cfl),
            format_seconds(row.rk3_seconds),
            str(row.rk3_rhs_evals),
            "true" if row.rk3_estimated else "false",
            format_seconds(row.sdg_seconds),
            str(row.sdg_rhs_evals),
            format_seconds(row.sdc_seconds),
            str(row.sdc_rhs_evals),
            format_seconds(row.adaptive_seconds),
            str(row.adaptive_rhs_evals),
            format_float(row.time_ratio),
            format_float(row.evals_ratio),
            format_float(row.sdc_time_ratio),
            format_float(row.sdc_evals_ratio),
        ]
        for row in rows_in
    ]
    return _write(path, TIMING_COLUMNS, rows)


def write_pointwise_csv(x: np.ndarray, dg_error: np.ndarray, filtered_error: np.ndarray, path: Union[str, Path]) -> Path:
    order = np.argsort(x, kind="stable")
    rows = (
        [format_float(x[i]), format_float(dg_error[i]), format_float(filtered_error[i])]
        for i in order
    )
    return _write(path, POINTWISE_COLUMNS, rows)


def row_path(template: str, degree: int, cells: int) -> Path:
    """Fill {degree} and {cells} in template, or append _p{degree}_N{cells} to the stem."""
    if "{degree}" in template or "{cells}" in template:
        return Path(template.format(degree=degree, cells=cells))
    path = Path(template)
    return path.with_name(f"{path.stem}_p{degree}_N{cells}{path.suffix or '.csv'}")
