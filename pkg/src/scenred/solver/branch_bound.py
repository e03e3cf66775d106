"""Branch-and-bound for mixed-binary programs on top of the simplex core.

Node LPs are solved from scratch on a shared computational form with per-node
bound overrides. Branching picks the most fractional binary (higher
``branch_priority`` classes first, ties by lowest variable index); node
selection is best-bound with ties by lowest node id. An optional known
feasible point can seed the incumbent; it never replaces the optimality proof.
"""

from __future__ import annotations

import heapq
import time
from typing import Optional

import numpy as np

from .model import MixedBinaryProgram, SolveResult, SolverLimits, Status
from .simplex import ComputationalForm


def _fractional(values: np.ndarray, tol: float) -> np.ndarray:
    return np.abs(values - np.round(values)) > tol


def solve_mip(mip: MixedBinaryProgram, limits: SolverLimits = SolverLimits(),
              incumbent_hint: Optional[np.ndarray] = None) -> SolveResult:
    """Solve a mixed-binary program to the requested relative gap."""
    lp = mip.lp
    binary = mip.binary
    if binary.size == 0:
        return ComputationalForm(lp).solve(limits)
    priority = (mip.branch_priority if mip.branch_priority is not None
                else np.zeros(binary.size, dtype=np.int64))

    form = ComputationalForm(lp)
    deadline = None
    if limits.time_limit is not None:
        deadline = time.monotonic() + limits.time_limit

    int_tol = limits.integrality_tol
    best_x = None
    best_obj = np.inf
    tree_exhausted = True

    if incumbent_hint is not None:
        hint = np.asarray(incumbent_hint, dtype=np.float64)
        hlo, hup = lp.lower.copy(), lp.upper.copy()
        hval = np.round(hint[binary])
        hlo[binary] = hval
        hup[binary] = hval
        res = form.solve(limits, lower=hlo, upper=hup)
        if res.status == Status.OPTIMAL:
            best_x = res.x
            best_obj = res.objective

    node_counter = 0
    total_iterations = 0
    nodes_processed = 0
    root = (-np.inf, node_counter, lp.lower.copy(), lp.upper.copy())
    heap = [root]
    hit_limit = None

    while heap:
        bound_est, _, nlo, nup = heapq.heappop(heap)
        if bound_est >= best_obj - limits.rel_gap * max(1.0, abs(best_obj)):
            continue
        if nodes_processed >= limits.max_nodes:
            hit_limit = Status.NODE_LIMIT
            heapq.heappush(heap, (bound_est, node_counter + 10**9, nlo, nup))
            tree_exhausted = False
            break
        if deadline is not None and time.monotonic() > deadline:
            hit_limit = Status.TIME_LIMIT
            heapq.heappush(heap, (bound_est, node_counter + 10**9, nlo, nup))
            tree_exhausted = False
            break

        res = form.solve(limits, lower=nlo, upper=nup)
        nodes_processed += 1
        total_iterations += res.iterations
        if res.status == Status.INFEASIBLE:
            continue
        if res.status in (Status.ITERATION_LIMIT, Status.TIME_LIMIT):
            hit_limit = res.status
            tree_exhausted = False
            break
        if res.status == Status.UNBOUNDED:
            return SolveResult(status=Status.UNBOUNDED, iterations=total_iterations,
                               node_count=nodes_processed, certificate=res.certificate)
        node_obj = res.objective
        if node_obj >= best_obj - limits.rel_gap * max(1.0, abs(best_obj)):
            continue

        xb = res.x[binary]
        frac = _fractional(xb, int_tol)
        if not frac.any():
            if node_obj < best_obj - 1e-12:
                best_obj = node_obj
                best_x = res.x.copy()
                best_x[binary] = np.round(best_x[binary])
            continue

        # most fractional within the highest eligible priority class
        cand = np.flatnonzero(frac)
        pr = priority[cand]
        cand = cand[pr == pr.max()]
        dist = np.abs(xb[cand] - np.round(xb[cand]))
        pick = int(cand[np.argmax(dist)])
        var = int(binary[pick])

        for fixed in (0.0, 1.0):
            clo, cup = nlo.copy(), nup.copy()
            clo[var] = fixed
            cup[var] = fixed
            node_counter += 1
            heapq.heappush(heap, (node_obj, node_counter, clo, cup))

    remaining = min((entry[0] for entry in heap), default=np.inf)
    if best_x is None:
        if hit_limit is not None:
            return SolveResult(status=hit_limit, iterations=total_iterations,
                               node_count=nodes_processed,
                               best_bound=None if remaining == -np.inf else remaining)
        return SolveResult(status=Status.INFEASIBLE, iterations=total_iterations,
                           node_count=nodes_processed)

    bound = best_obj if tree_exhausted else min(best_obj, remaining)
    if bound == -np.inf:
        bound = remaining if remaining != -np.inf else best_obj
    gap = max(0.0, (best_obj - bound) / max(1.0, abs(best_obj)))
    status = Status.OPTIMAL if (hit_limit is None and gap <= limits.rel_gap) else (hit_limit or Status.OPTIMAL)
    return SolveResult(
        status=status,
        x=best_x,
        objective=best_obj,
        iterations=total_iterations,
        best_bound=bound,
        rel_gap=gap,
        node_count=nodes_processed,
    )
