"""Data model for two-stage stochastic programs over finite scenario sets."""

from __future__ import annotations

import abc
import json
from dataclasses import dataclass, field
from typing import List, Optional, Sequence

import numpy as np

from .solver import SolveResult, SolverLimits, Status, solve_mip

DOMAIN_REAL = "real"
DOMAIN_NONNEG_INT = "nonneg-int"
DOMAIN_BINARY = "binary"
_DOMAINS = (DOMAIN_REAL, DOMAIN_NONNEG_INT, DOMAIN_BINARY)

_PROB_TOL = 1e-12


class RecourseError(RuntimeError):
    """A second-stage evaluation failed; complete recourse is violated."""


class ScenarioDomainError(ValueError):
    """A scenario set does not fit the problem's scenario domain."""


def _check_domain(values: np.ndarray, domain: str) -> None:
    if domain == DOMAIN_NONNEG_INT:
        if np.any(values < 0) or np.any(np.abs(values - np.round(values)) > 1e-9):
            raise ScenarioDomainError("scenario entries must be non-negative integers")
    elif domain == DOMAIN_BINARY:
        if not np.all((values == 0.0) | (values == 1.0)):
            raise ScenarioDomainError("scenario entries must be binary")
    elif domain != DOMAIN_REAL:
        raise ScenarioDomainError(f"unknown scenario domain: {domain!r}")


@dataclass
class ScenarioSet:
    """N scenarios of dimension d with their probabilities."""

    values: np.ndarray
    probabilities: np.ndarray
    domain: str = DOMAIN_REAL

    def __post_init__(self):
        self.values = np.atleast_2d(np.asarray(self.values, dtype=np.float64))
        self.probabilities = np.asarray(self.probabilities, dtype=np.float64)
        if self.values.shape[0] < 1:
            raise ValueError("a scenario set needs at least one scenario")
        if self.probabilities.shape != (self.values.shape[0],):
            raise ValueError("probability vector length must equal the scenario count")
        if np.any(self.probabilities < 0):
            raise ValueError("probabilities must be non-negative")
        if abs(self.probabilities.sum() - 1.0) > _PROB_TOL:
            raise ValueError("probabilities must sum to 1")
        _check_domain(self.values, self.domain)

    @classmethod
    def equiprobable(cls, values, domain=DOMAIN_REAL) -> "ScenarioSet":
        values = np.atleast_2d(np.asarray(values, dtype=np.float64))
        n = values.shape[0]
        return cls(values=values, probabilities=np.full(n, 1.0 / n), domain=domain)

    @property
    def size(self) -> int:
        return self.values.shape[0]

    @property
    def dim(self) -> int:
        return self.values.shape[1]


@dataclass
class ReducedScenarioSet:
    """K weighted scenarios; each is either a row of the source set or synthetic."""

    values: np.ndarray
    probabilities: np.ndarray
    source_index: List[Optional[int]] = field(default_factory=list)

    def __post_init__(self):
        self.values = np.atleast_2d(np.asarray(self.values, dtype=np.float64))
        self.probabilities = np.asarray(self.probabilities, dtype=np.float64)
        k = self.values.shape[0]
        if self.probabilities.shape != (k,):
            raise ValueError("probability vector length must equal the scenario count")
        if abs(self.probabilities.sum() - 1.0) > 1e-9 or np.any(self.probabilities < 0):
            raise ValueError("probabilities must be non-negative and sum to 1")
        if not self.source_index:
            self.source_index = [None] * k
        if len(self.source_index) != k:
            raise ValueError("source_index length must equal the scenario count")

    @property
    def size(self) -> int:
        return self.values.shape[0]

    def to_json_dict(self) -> dict:
        return {
            "values": [[float(v) for v in row] for row in self.values],
            "probabilities": [float(p) for p in self.probabilities],
            "source_index": self.source_index,
        }

    @classmethod
    def from_json_dict(cls, d: dict) -> "ReducedScenarioSet":
        return cls(values=np.array(d["values"], dtype=float),
                   probabilities=np.array(d["probabilities"], dtype=float),
                   source_index=list(d["source_index"]))


def identity_reduction(scenarios: ScenarioSet) -> ReducedScenarioSet:
    return ReducedScenarioSet(
        values=scenarios.values.copy(),
        probabilities=scenarios.probabilities.copy(),
        source_index=list(range(scenarios.size)),
    )


@dataclass
class FirstStageSolution:
    """A first-stage decision vector with the objective of the producing solve."""

    x: np.ndarray
    objective: float
    provenance: str = ""
    status: Status = Status.OPTIMAL
    best_bound: Optional[float] = None
    rel_gap: Optional[float] = None

    def __post_init__(self):
        self.x = np.asarray(self.x, dtype=np.float64)


class TwoStageProblem(abc.ABC):
    """Interface every problem family implements and every reduction consumes.

    Implementations are immutable after construction. ``relaxed_default``
    controls whether one-scenario solves use the continuous relaxation (with
    problem-specific rounding) when no explicit mode is requested.
    """

    family: str = "abstract"
    scenario_domain: str = DOMAIN_REAL
    relaxed_default: bool = False

    @property
    @abc.abstractmethod
    def scenario_dim(self) -> int: ...

    @property
    @abc.abstractmethod
    def first_stage_dim(self) -> int: ...

    @property
    @abc.abstractmethod
    def scenario_set(self) -> ScenarioSet: ...

    @abc.abstractmethod
    def second_stage_value(self, x: np.ndarray, scenario: np.ndarray,
                           limits: SolverLimits = SolverLimits()) -> float:
        """Exact recourse cost of first-stage x under one scenario."""

    @abc.abstractmethod
    def solve_one_scenario(self, scenario: np.ndarray, relaxed: Optional[bool] = None,
                           limits: SolverLimits = SolverLimits()) -> FirstStageSolution:
        """Deterministic single-scenario solve (exact, or relaxed + rounded)."""

    @abc.abstractmethod
    def build_extensive(self, reduced: ReducedScenarioSet):
        """Return (MixedBinaryProgram, first_stage_slice) for the weighted set."""

    def first_stage_feasible(self, x: np.ndarray) -> bool:
        return True

    def validate_scenario_values(self, values: np.ndarray) -> None:
        """Reject scenario values outside the problem's admissible domain.

        The default accepts anything; integer/binary-structured second stages
        override this to fail fast before a solve is attempted.
        """

    def solve_extensive(self, reduced: ReducedScenarioSet,
                        limits: SolverLimits = SolverLimits()) -> FirstStageSolution:
        self.validate_scenario_values(reduced.values)
        mip, sl = self.build_extensive(reduced)
        res = solve_mip(mip, limits)
        if res.x is None:
            raise RecourseError(f"extensive solve failed with status {res.status.value}")
        return FirstStageSolution(
            x=res.x[sl], objective=res.objective,
            provenance=f"{self.family}:extensive(K={reduced.size})",
            status=res.status, best_bound=res.best_bound, rel_gap=res.rel_gap,
        )


def expected_cost(problem: TwoStageProblem, x, scenarios: ScenarioSet,
                  limits: SolverLimits = SolverLimits()) -> float:
    """Probability-weighted exact recourse cost of x over a scenario set."""
    return float(scenarios.probabilities @ cost_profile(problem, x, scenarios, limits))


def cost_profile(problem: TwoStageProblem, x, scenarios: ScenarioSet,
                 limits: SolverLimits = SolverLimits()) -> np.ndarray:
    """Vector of second-stage values F(x, scenario_i), solved exactly."""
    x = np.asarray(x, dtype=np.float64)
    if not problem.first_stage_feasible(x):
        raise ValueError("x is not first-stage feasible")
    out = np.empty(scenarios.size)
    for i in range(scenarios.size):
        out[i] = problem.second_stage_value(x, scenarios.values[i], limits)
    return out


def reduced_cost_profile(problem: TwoStageProblem, x, reduced: ReducedScenarioSet,
                         limits: SolverLimits = SolverLimits()) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    out = np.empty(reduced.size)
    for i in range(reduced.size):
        out[i] = problem.second_stage_value(x, reduced.values[i], limits)
    return out


def reduced_expected_cost(problem: TwoStageProblem, x, reduced: ReducedScenarioSet,
                          limits: SolverLimits = SolverLimits()) -> float:
    return float(reduced.probabilities @ reduced_cost_profile(problem, x, reduced, limits))


def solve_deterministic(problem: TwoStageProblem, scenario_index: int,
                        relaxed: Optional[bool] = None,
                        limits: SolverLimits = SolverLimits()) -> FirstStageSolution:
    """Solve the one-scenario problem for a scenario of the problem's own set."""
    scen = problem.scenario_set
    if not 0 <= scenario_index < scen.size:
        raise IndexError("scenario index out of range")
    return problem.solve_one_scenario(scen.values[scenario_index], relaxed=relaxed, limits=limits)


def solve_extensive(problem: TwoStageProblem, reduced: ReducedScenarioSet,
                    limits: SolverLimits = SolverLimits()) -> FirstStageSolution:
    """Solve the weighted-scenario problem and return the first-stage solution."""
    return problem.solve_extensive(reduced, limits)


def write_json_atomic(path, payload: dict) -> None:
    import os
    import tempfile

    path = str(path)
    d = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=d, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            json.dump(payload, fh, indent=1)
            fh.write("\n")
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
