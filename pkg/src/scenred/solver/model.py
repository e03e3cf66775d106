"""Containers for linear and mixed-binary programs (minimization only)."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
import scipy.sparse as sp

LEQ = "<"
EQ = "="
GEQ = ">"
_SENSES = (LEQ, EQ, GEQ)


class Status(enum.Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"
    ITERATION_LIMIT = "iteration-limit"
    NODE_LIMIT = "node-limit"
    TIME_LIMIT = "time-limit"


class MalformedProgramError(ValueError):
    """Raised when a program fails validation before any solving is attempted."""


class NumericalError(RuntimeError):
    """Raised when the simplex cannot maintain a usable factorization."""


@dataclass(frozen=True)
class SolverLimits:
    """Caps and tolerances shared by the LP and branch-and-bound solvers."""

    max_lp_iterations: Optional[int] = None  # None: scaled from problem size
    max_nodes: int = 500_000
    time_limit: Optional[float] = None  # seconds, wall clock
    rel_gap: float = 1e-6
    feasibility_tol: float = 1e-7
    integrality_tol: float = 1e-6

    def lp_iteration_cap(self, n_rows: int, n_cols: int) -> int:
        if self.max_lp_iterations is not None:
            return self.max_lp_iterations
        return 200 * (n_rows + n_cols) + 20_000


def _as_float_array(values, name: str) -> np.ndarray:
    arr = np.ascontiguousarray(values, dtype=np.float64)
    if arr.ndim != 1:
        raise MalformedProgramError(f"{name} must be one-dimensional")
    return arr


@dataclass
class LinearProgram:
    """min objective @ x  s.t.  matrix @ x (<=, =, >=) rhs,  lower <= x <= upper.

    The matrix is stored in compressed sparse column form. Infinity is allowed
    only as an upper bound.
    """

    objective: np.ndarray
    matrix: sp.csc_matrix
    senses: np.ndarray
    rhs: np.ndarray
    lower: np.ndarray
    upper: np.ndarray
    offset: float = 0.0

    def __post_init__(self):
        self.objective = _as_float_array(self.objective, "objective")
        self.rhs = _as_float_array(self.rhs, "rhs")
        self.lower = _as_float_array(self.lower, "lower")
        self.upper = _as_float_array(self.upper, "upper")
        if not sp.issparse(self.matrix):
            self.matrix = sp.csc_matrix(np.asarray(self.matrix, dtype=np.float64))
        self.matrix = self.matrix.tocsc().astype(np.float64)
        self.matrix.sort_indices()
        self.senses = np.asarray(self.senses, dtype="<U1")
        self.validate()

    @property
    def n_rows(self) -> int:
        return self.matrix.shape[0]

    @property
    def n_cols(self) -> int:
        return self.matrix.shape[1]

    def validate(self) -> None:
        m, n = self.matrix.shape
        if self.objective.shape[0] != n:
            raise MalformedProgramError("objective length does not match matrix columns")
        if self.rhs.shape[0] != m or self.senses.shape[0] != m:
            raise MalformedProgramError("rhs/senses length does not match matrix rows")
        if self.lower.shape[0] != n or self.upper.shape[0] != n:
            raise MalformedProgramError("bound length does not match matrix columns")
        if not np.all(np.isin(self.senses, _SENSES)):
            raise MalformedProgramError("row senses must be one of '<', '=', '>'")
        for name, arr in (("objective", self.objective), ("rhs", self.rhs)):
            if not np.all(np.isfinite(arr)):
                raise MalformedProgramError(f"{name} contains NaN or infinite entries")
        if np.any(np.isnan(self.matrix.data)) or np.any(np.isinf(self.matrix.data)):
            raise MalformedProgramError("matrix contains NaN or infinite entries")
        if np.any(np.isnan(self.lower)) or np.any(np.isinf(self.lower)):
            raise MalformedProgramError("lower bounds must be finite")
        if np.any(np.isnan(self.upper)) or np.any(self.upper == -np.inf):
            raise MalformedProgramError("upper bounds may not be NaN or -inf")
        if np.any(self.lower > self.upper):
            raise MalformedProgramError("every bound pair must satisfy lower <= upper")
        if not np.isfinite(self.offset):
            raise MalformedProgramError("objective offset must be finite")

    def copy(self) -> "LinearProgram":
        return LinearProgram(
            objective=self.objective.copy(),
            matrix=self.matrix.copy(),
            senses=self.senses.copy(),
            rhs=self.rhs.copy(),
            lower=self.lower.copy(),
            upper=self.upper.copy(),
            offset=self.offset,
        )


@dataclass
class MixedBinaryProgram:
    """A linear program plus a set of variable indices restricted to {0, 1}.

    ``branch_priority`` optionally ranks binaries for branching: among
    fractional binaries, higher-priority ones are branched first.
    """

    lp: LinearProgram
    binary: np.ndarray
    branch_priority: Optional[np.ndarray] = None

    def __post_init__(self):
        self.binary = np.unique(np.asarray(self.binary, dtype=np.int64))
        if self.binary.size:
            if self.binary[0] < 0 or self.binary[-1] >= self.lp.n_cols:
                raise MalformedProgramError("binary index out of range")
            lo = self.lp.lower[self.binary]
            hi = self.lp.upper[self.binary]
            if np.any(lo < -1e-12) or np.any(hi > 1 + 1e-12):
                raise MalformedProgramError("binary variables must have bounds within [0, 1]")
        if self.branch_priority is not None:
            self.branch_priority = np.asarray(self.branch_priority, dtype=np.int64)
            if self.branch_priority.shape[0] != self.binary.shape[0]:
                raise MalformedProgramError("branch_priority length must match binary count")


@dataclass
class SolveResult:
    """Outcome of an LP or MIP solve.

    For LPs, ``duals`` holds one multiplier per row and ``reduced_costs`` one
    per structural column; both come from the final simplex basis. For MIPs,
    ``objective`` is the incumbent value and ``best_bound``/``rel_gap`` report
    the proof state. ``certificate`` carries a phase-1 dual vector for
    infeasible programs or a primal ray for unbounded ones.
    """

    status: Status
    x: Optional[np.ndarray] = None
    objective: Optional[float] = None
    duals: Optional[np.ndarray] = None
    reduced_costs: Optional[np.ndarray] = None
    iterations: int = 0
    best_bound: Optional[float] = None
    rel_gap: Optional[float] = None
    node_count: int = 0
    n_alternate_optima: int = 0
    certificate: Optional[dict] = None

    @property
    def is_optimal(self) -> bool:
        return self.status == Status.OPTIMAL

    def to_canonical_dict(self) -> dict:
        """Deterministic plain-python view used for byte-level comparisons."""

        def conv(v):
            if isinstance(v, np.ndarray):
                return [float(e) for e in v]
            if isinstance(v, (np.floating, np.integer)):
                return v.item()
            return v

        return {
            "status": self.status.value,
            "x": conv(self.x),
            "objective": conv(self.objective),
            "duals": conv(self.duals),
            "reduced_costs": conv(self.reduced_costs),
            "best_bound": conv(self.best_bound),
            "rel_gap": conv(self.rel_gap),
            "node_count": self.node_count,
        }


def _format_number(v: float) -> str:
    return repr(float(v))


def dump_program(program) -> str:
    """Line-oriented text dump of a program, for diffing and external checks.

    Layout: one objective line, one line per constraint, one line per variable
    bound pair, then the binary index list (if any).
    """
    if isinstance(program, MixedBinaryProgram):
        lp = program.lp
        binary = program.binary
    else:
        lp = program
        binary = np.empty(0, dtype=np.int64)
    lines = []
    terms = " + ".join(
        f"{_format_number(cj)} x{j}" for j, cj in enumerate(lp.objective) if cj != 0.0
    )
    offset = f" + {_format_number(lp.offset)}" if lp.offset else ""
    lines.append(f"min {terms or '0'}{offset}")
    csr = lp.matrix.tocsr()
    sense_txt = {LEQ: "<=", EQ: "=", GEQ: ">="}
    for i in range(lp.n_rows):
        s, e = csr.indptr[i], csr.indptr[i + 1]
        row = " + ".join(
            f"{_format_number(v)} x{j}" for j, v in zip(csr.indices[s:e], csr.data[s:e])
        )
        lines.append(f"r{i}: {row or '0'} {sense_txt[str(lp.senses[i])]} {_format_number(lp.rhs[i])}")
    for j in range(lp.n_cols):
        lines.append(f"b{j}: {_format_number(lp.lower[j])} <= x{j} <= {_format_number(lp.upper[j])}")
    if binary.size:
        lines.append("binary: " + " ".join(f"x{j}" for j in binary))
    return "\n".join(lines) + "\n"
