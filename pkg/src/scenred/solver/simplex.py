"""Bounded-variable revised simplex on an explicit basis inverse.

The solver works on a computational form ``A x = b`` whose columns are
[structural | slack | artificial]. Phase 1 minimizes the artificial mass from
a signed-diagonal crash basis; phase 2 minimizes the real objective. Dantzig
pricing with a Bland fallback after a stall is used throughout, and the basis
inverse is refactorized periodically.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Optional

import numpy as np
import scipy.sparse as sp

from . import kernels
from .kernels import BASIC, NB_LB, NB_UB, PHASE_ITER_LIMIT, PHASE_OPTIMAL, PHASE_REFACTOR, PHASE_UNBOUNDED
from .model import (
    EQ,
    GEQ,
    LEQ,
    LinearProgram,
    NumericalError,
    SolveResult,
    SolverLimits,
    Status,
)

_TOL_DJ = 1e-9
_TOL_PIV = 1e-9
_STALL_LIMIT = 50


@dataclass
class _PhaseOutcome:
    code: int
    iterations: int
    bland: int
    entering: int
    direction: int
    timed_out: bool = False


class ComputationalForm:
    """Reusable standard form of one LinearProgram.

    Bound overrides on structural variables are supported per solve, which is
    what branch-and-bound relies on; the sparse matrix is built once.
    """

    def __init__(self, lp: LinearProgram, kernel_backend: Optional[str] = None):
        lp.validate()
        self.lp = lp
        self._run_phase, self.backend = kernels.get_backend(kernel_backend)
        m, n = lp.n_rows, lp.n_cols
        self.m = m
        self.n_struct = n

        ineq = np.flatnonzero(lp.senses != EQ)
        self.n_slack = ineq.size
        n_total = n + self.n_slack + m
        self.n_total = n_total

        mat = lp.matrix
        nnz = mat.nnz
        data = np.empty(nnz + self.n_slack + m, dtype=np.float64)
        indices = np.empty_like(data, dtype=np.int32)
        indptr = np.empty(n_total + 1, dtype=np.int32)
        data[:nnz] = mat.data
        indices[:nnz] = mat.indices
        indptr[: n + 1] = mat.indptr
        self.slack_col_of_row = np.full(m, -1, dtype=np.int64)
        pos = nnz
        col = n
        for i in ineq:
            data[pos] = 1.0 if lp.senses[i] == LEQ else -1.0
            indices[pos] = i
            pos += 1
            col += 1
            indptr[col] = pos
            self.slack_col_of_row[i] = col - 1
        self.art_col_of_row = np.arange(m, dtype=np.int64) + n + self.n_slack
        self.art_data_pos = np.arange(m, dtype=np.int64) + pos
        for i in range(m):
            data[pos] = 1.0
            indices[pos] = i
            pos += 1
            col += 1
            indptr[col] = pos
        self.data = data
        self.indices = indices
        self.indptr = indptr
        self.A = sp.csc_matrix((data, indices, indptr), shape=(m, n_total), copy=False)
        self.b = lp.rhs.astype(np.float64).copy()

        self._lb_template = np.concatenate([lp.lower, np.zeros(self.n_slack + m)])
        self._ub_template = np.concatenate([lp.upper, np.full(self.n_slack, np.inf), np.zeros(m)])
        self._c2 = np.concatenate([lp.objective, np.zeros(self.n_slack + m)])
        self._refactor_every = max(100, min(1000, m))

    # -- internals -------------------------------------------------------

    def _refactorize(self, basis, x):
        B = np.zeros((self.m, self.m), order="F")
        for i in range(self.m):
            col = basis[i]
            s, e = self.indptr[col], self.indptr[col + 1]
            B[self.indices[s:e], i] = self.data[s:e]
        try:
            binv = np.asfortranarray(np.linalg.inv(B))
        except np.linalg.LinAlgError as exc:
            raise NumericalError("singular basis during refactorization") from exc
        x_nb = x.copy()
        x_nb[basis] = 0.0
        x[basis] = binv @ (self.b - self.A @ x_nb)
        return binv

    def _phase_loop(self, c, lb, ub, basis, vstat, x, binv, max_iter, bland, deadline):
        total = 0
        while True:
            budget = max_iter - total
            if budget <= 0:
                return _PhaseOutcome(PHASE_ITER_LIMIT, total, bland, -1, 0), binv
            code, it, bland, q, dirn = self._run_phase(
                self.data, self.indices, self.indptr, c, lb, ub, basis, vstat, x, binv,
                budget, self._refactor_every, _TOL_DJ, _TOL_PIV, _STALL_LIMIT, bland,
            )
            total += it
            if code == PHASE_REFACTOR:
                binv = self._refactorize(basis, x)
                if deadline is not None and time.monotonic() > deadline:
                    return _PhaseOutcome(PHASE_ITER_LIMIT, total, bland, -1, 0, timed_out=True), binv
                continue
            return _PhaseOutcome(code, total, bland, q, dirn), binv

    def _crash(self, lb, ub):
        """Signed-diagonal starting basis: slack where feasible, else artificial."""
        m, n = self.m, self.n_struct
        x = np.zeros(self.n_total)
        x[:n] = lb[:n]
        vstat = np.full(self.n_total, NB_LB, dtype=np.int8)
        basis = np.empty(m, dtype=np.int32)
        r = self.b - self.A[:, :n] @ x[:n]
        diag = np.empty(m)
        art_basic = np.zeros(m, dtype=bool)
        for i in range(m):
            s = self.lp.senses[i]
            slack_col = self.slack_col_of_row[i]
            if s == LEQ and r[i] >= 0.0:
                basis[i] = slack_col
                x[slack_col] = r[i]
                diag[i] = 1.0
            elif s == GEQ and r[i] <= 0.0:
                basis[i] = slack_col
                x[slack_col] = -r[i]
                diag[i] = -1.0
            else:
                col = self.art_col_of_row[i]
                sign = 1.0 if r[i] >= 0.0 else -1.0
                self.data[self.art_data_pos[i]] = sign
                basis[i] = col
                x[col] = abs(r[i])
                diag[i] = sign
                art_basic[i] = True
                ub[col] = np.inf
        vstat[basis] = BASIC
        binv = np.asfortranarray(np.diag(diag))
        return basis, vstat, x, binv, art_basic

    # -- public ----------------------------------------------------------

    def solve(self, limits: SolverLimits = SolverLimits(),
              lower: Optional[np.ndarray] = None,
              upper: Optional[np.ndarray] = None,
              rhs: Optional[np.ndarray] = None,
              objective: Optional[np.ndarray] = None) -> SolveResult:
        """Solve with optional structural bound / rhs / objective overrides."""
        if rhs is not None:
            self.b = np.asarray(rhs, dtype=np.float64).copy()
        if objective is not None:
            self._c2 = np.concatenate([np.asarray(objective, dtype=np.float64),
                                       np.zeros(self.n_slack + self.m)])
        lb = self._lb_template.copy()
        ub = self._ub_template.copy()
        if lower is not None:
            lb[: self.n_struct] = lower
        if upper is not None:
            ub[: self.n_struct] = upper
        if np.any(lb[: self.n_struct] > ub[: self.n_struct]):
            return SolveResult(status=Status.INFEASIBLE, certificate={"reason": "crossed bounds"})

        deadline = None
        if limits.time_limit is not None:
            deadline = time.monotonic() + limits.time_limit
        max_iter = limits.lp_iteration_cap(self.m, self.n_total)
        art = self.art_col_of_row

        basis, vstat, x, binv, art_basic = self._crash(lb, ub)
        c1 = np.zeros(self.n_total)
        c1[art] = 1.0

        out1, binv = self._phase_loop(c1, lb, ub, basis, vstat, x, binv, max_iter, 0, deadline)
        iters = out1.iterations
        if out1.code == PHASE_ITER_LIMIT:
            status = Status.TIME_LIMIT if out1.timed_out else Status.ITERATION_LIMIT
            return SolveResult(status=status, iterations=iters)
        if out1.code == PHASE_UNBOUNDED:
            raise NumericalError("phase 1 reported an unbounded direction")
        infeas_mass = float(np.abs(x[art]).sum())
        scale = 1.0 + float(np.abs(self.b).max(initial=0.0))
        if infeas_mass > limits.feasibility_tol * scale:
            y1 = binv.T @ c1[basis]
            return SolveResult(
                status=Status.INFEASIBLE,
                iterations=iters,
                certificate={"phase1_duals": y1, "phase1_objective": infeas_mass},
            )

        ub[art] = 0.0
        x[art] = 0.0
        out2, binv = self._phase_loop(
            self._c2, lb, ub, basis, vstat, x, binv, max_iter - iters, out1.bland, deadline
        )
        iters += out2.iterations
        if out2.code == PHASE_ITER_LIMIT:
            status = Status.TIME_LIMIT if out2.timed_out else Status.ITERATION_LIMIT
            return SolveResult(status=status, iterations=iters)
        if out2.code == PHASE_UNBOUNDED:
            q, dirn = out2.entering, out2.direction
            w = np.zeros(self.m)
            for k in range(self.indptr[q], self.indptr[q + 1]):
                w += self.data[k] * binv[:, self.indices[k]]
            ray = np.zeros(self.n_total)
            ray[q] = dirn
            ray[basis] -= dirn * w
            return SolveResult(
                status=Status.UNBOUNDED,
                iterations=iters,
                certificate={"ray": ray[: self.n_struct]},
            )

        # verify the claimed optimum against a fresh factorization
        binv = self._refactorize(basis, x)
        resid = float(np.abs(self.b - self.A @ x).max(initial=0.0))
        bound_viol = float(
            max(np.maximum(lb - x, 0.0).max(initial=0.0), np.maximum(x - ub, 0.0).max(initial=0.0))
        )
        if resid > limits.feasibility_tol * scale or bound_viol > limits.feasibility_tol * scale:
            out3, binv = self._phase_loop(
                self._c2, lb, ub, basis, vstat, x, binv, max_iter - iters, 1, deadline
            )
            iters += out3.iterations
            resid = float(np.abs(self.b - self.A @ x).max(initial=0.0))
            if out3.code != PHASE_OPTIMAL or resid > limits.feasibility_tol * scale:
                raise NumericalError("could not certify primal feasibility at optimality")

        y = binv.T @ self._c2[basis]
        z = self._c2 - self.A.T @ y
        movable = ub > lb
        nonbasic = vstat != BASIC
        alt = int(np.sum(nonbasic[: self.n_struct] & movable[: self.n_struct]
                         & (np.abs(z[: self.n_struct]) <= 1e-9)))
        obj = float(self._c2 @ x) + self.lp.offset
        return SolveResult(
            status=Status.OPTIMAL,
            x=x[: self.n_struct].copy(),
            objective=obj,
            duals=y,
            reduced_costs=z[: self.n_struct].copy(),
            iterations=iters,
            n_alternate_optima=alt,
        )


def solve_lp(lp: LinearProgram, limits: SolverLimits = SolverLimits()) -> SolveResult:
    """Solve a linear program; rejects malformed input before solving."""
    return ComputationalForm(lp).solve(limits)
