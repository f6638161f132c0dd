"""
Run configuration for studies.

A RunConfig is assembled from up to three mappings, later ones winning:
an experiment preset (typed YAML values), a key=value run file and explicit
command-line flags (both plain strings). Lists are given either as YAML lists
or as comma separated strings.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, Iterable, Mapping, Optional, Tuple

from core.utils import InvalidArgumentError
from harness.problems import Problem, ProblemKind, get_problem
from integrators.registry import IntegratorSpec, is_integrator_registered
from numerics.precision import Precision

logger = logging.getLogger(__name__)

RUN_KEYS = frozenset(
    {
        "problem",
        "degrees",
        "resolutions",
        "cfl",
        "cfl_by_degree",
        "cfls",
        "final_time",
        "integrator",
        "iterations",
        "variant",
        "epsilon",
        "kmax",
        "precision",
        "output",
        "pointwise_output",
        "workers",
        "wallclock",
        "rk3_budget_seconds",
        "reference",
    }
)

# Printed filtered errors below this are not attainable in double precision.
PRECISION_FLOOR = 5e-13

Reference = Dict[int, Dict[int, Tuple[float, float]]]


def _split(raw) -> list:
    if isinstance(raw, str):
        return [item.strip() for item in raw.split(",") if item.strip()]
    if isinstance(raw, Iterable):
        return list(raw)
    return [raw]


def _cast(key: str, raw, cast):
    try:
        return cast(raw)
    except (TypeError, ValueError):
        raise InvalidArgumentError(f"Invalid value for '{key}': {raw!r}")


def _int_tuple(key: str, raw) -> Tuple[int, ...]:
    return tuple(_cast(key, item, int) for item in _split(raw))


def _float_tuple(key: str, raw) -> Tuple[float, ...]:
    return tuple(_cast(key, item, float) for item in _split(raw))


def _bool(key: str, raw) -> bool:
    if isinstance(raw, bool):
        return raw
    text = str(raw).strip().lower()
    if text in ("1", "true", "yes", "on"):
        return True
    if text in ("0", "false", "no", "off"):
        return False
    raise InvalidArgumentError(f"Invalid value for '{key}': {raw!r}")


def _optional(raw) -> bool:
    return raw is None or (isinstance(raw, str) and not raw.strip())


def _degree_map(raw) -> Dict[int, float]:
    """{p: cfl} from a mapping or a 'p:cfl,p:cfl' string."""
    if isinstance(raw, Mapping):
        items = raw.items()
    else:
        items = []
        for entry in _split(raw):
            if ":" not in entry:
                raise InvalidArgumentError(f"Invalid cfl_by_degree entry '{entry}', expected p:cfl")
            items.append(tuple(entry.split(":", 1)))
    return {_cast("cfl_by_degree", p, int): _cast("cfl_by_degree", c, float) for p, c in items}


def _reference(raw) -> Reference:
    """{p: {N: (dg_l2, pp_l2)}} from the preset layout."""
    if not isinstance(raw, Mapping):
        raise InvalidArgumentError("Reference errors can only be given by a preset")
    table: Reference = {}
    for degree, rows in raw.items():
        table[int(degree)] = {int(cells): (float(pair[0]), float(pair[1])) for cells, pair in rows.items()}
    return table


@dataclass(frozen=True)
class RunConfig:
    """
    Everything a study needs.

    Attributes:
        problem: linear, variable or burgers.
        degrees: Polynomial degrees p.
        resolutions: Element counts N, ideally successive doublings.
        cfl: CFL number; None means cfl_by_degree or the problem default.
        cfl_by_degree: Per-degree CFL numbers.
        cfls: CFL list for sweeps.
        final_time: T; None means the problem default.
        integrator: Time integrator description.
        precision: Working precision.
        output: Main CSV path, if any.
        pointwise_output: Pointwise error CSV path (may contain {degree} and {cells}).
        workers: Convergence rows computed concurrently.
        wallclock: Report seconds; off makes CSV output deterministic.
        rk3_budget_seconds: Wall-clock cap of RK3 timing runs.
        reference: Printed (dg, filtered) errors used for precision gating.
    """

    problem: ProblemKind = ProblemKind.LINEAR
    degrees: Tuple[int, ...] = (1,)
    resolutions: Tuple[int, ...] = (20, 40, 80, 160)
    cfl: Optional[float] = None
    cfl_by_degree: Dict[int, float] = field(default_factory=dict)
    cfls: Tuple[float, ...] = ()
    final_time: Optional[float] = None
    integrator: IntegratorSpec = field(default_factory=lambda: IntegratorSpec("sdg"))
    precision: Precision = Precision.STANDARD
    output: Optional[str] = None
    pointwise_output: Optional[str] = None
    workers: int = 1
    wallclock: bool = True
    rk3_budget_seconds: float = 120.0
    reference: Reference = field(default_factory=dict)

    def __post_init__(self):
        if not self.degrees:
            raise InvalidArgumentError("At least one polynomial degree is required")
        for degree in self.degrees:
            if degree < 1:
                raise InvalidArgumentError(f"Polynomial degrees must be >= 1, got {degree}")
        if not self.resolutions:
            raise InvalidArgumentError("At least one resolution N is required")
        for cells in self.resolutions:
            if cells < 4:
                raise InvalidArgumentError(f"Resolutions must have N >= 4, got {cells}")
        for value in [self.cfl, *self.cfl_by_degree.values(), *self.cfls]:
            if value is not None and not value > 0:
                raise InvalidArgumentError(f"CFL numbers must be positive, got {value}")
        if self.final_time is not None and not self.final_time > 0:
            raise InvalidArgumentError(f"Final time must be positive, got {self.final_time}")
        if self.workers < 1:
            raise InvalidArgumentError(f"workers must be >= 1, got {self.workers}")
        if not is_integrator_registered(self.integrator.kind):
            raise InvalidArgumentError(f"Unknown integrator '{self.integrator.kind}'")
        if any(b != 2 * a for a, b in zip(self.resolutions, self.resolutions[1:])):
            logger.warning(f"Resolutions {list(self.resolutions)} are not successive doublings")

    def get_problem(self) -> Problem:
        return get_problem(self.problem)

    def cfl_for(self, degree: int) -> float:
        if self.cfl is not None:
            return self.cfl
        if degree in self.cfl_by_degree:
            return self.cfl_by_degree[degree]
        return self.get_problem().cfl

    def time_for(self) -> float:
        return self.final_time if self.final_time is not None else self.get_problem().final_time

    def reference_for(self, degree: int, cells: int) -> Optional[Tuple[float, float]]:
        return self.reference.get(degree, {}).get(cells)

    def needs_extended_precision(self, degree: int, cells: int) -> bool:
        """True if the printed filtered error is below what double precision resolves."""
        reference = self.reference_for(degree, cells)
        return reference is not None and reference[1] < PRECISION_FLOOR

    @classmethod
    def from_mapping(cls, values: Mapping[str, object]) -> "RunConfig":
        """Build from a flat mapping of run keys; empty values mean 'default'."""
        unknown = set(values) - RUN_KEYS
        if unknown:
            raise InvalidArgumentError(f"Unknown run configuration keys: {', '.join(sorted(unknown))}")
        given = {key: value for key, value in values.items() if not _optional(value)}

        kwargs = {"integrator": IntegratorSpec.from_mapping(given)}
        if "problem" in given:
            kwargs["problem"] = ProblemKind.parse(given["problem"])
        if "degrees" in given:
            kwargs["degrees"] = _int_tuple("degrees", given["degrees"])
        if "resolutions" in given:
            kwargs["resolutions"] = _int_tuple("resolutions", given["resolutions"])
        if "cfl" in given:
            kwargs["cfl"] = _cast("cfl", given["cfl"], float)
        if "cfl_by_degree" in given:
            kwargs["cfl_by_degree"] = _degree_map(given["cfl_by_degree"])
        if "cfls" in given:
            kwargs["cfls"] = _float_tuple("cfls", given["cfls"])
        if "final_time" in given:
            kwargs["final_time"] = _cast("final_time", given["final_time"], float)
        if "precision" in given:
            kwargs["precision"] = Precision.parse(given["precision"])
        for key in ("output", "pointwise_output"):
            if key in given:
                kwargs[key] = str(given[key])
        if "workers" in given:
            kwargs["workers"] = _cast("workers", given["workers"], int)
        if "wallclock" in given:
            kwargs["wallclock"] = _bool("wallclock", given["wallclock"])
        if "rk3_budget_seconds" in given:
            kwargs["rk3_budget_seconds"] = _cast("rk3_budget_seconds", given["rk3_budget_seconds"], float)
        if "reference" in given:
            kwargs["reference"] = _reference(given["reference"])
        return cls(**kwargs)

    @classmethod
    def from_sources(cls, *sources: Optional[Mapping[str, object]]) -> "RunConfig":
        """Merge mappings left to right (preset, run file, CLI) and build."""
        merged: Dict[str, object] = {}
        for source in sources:
            if source:
                merged.update({key: value for key, value in source.items() if not _optional(value)})
        return cls.from_mapping(merged)
