"""Pure-numpy implementation of the bounded-variable simplex pivot loop.

This is the fallback backend; ``scenred.solver._kernel`` is the compiled twin
with identical pivot rules. Both operate on a computational form
``A x = b, lb <= x <= ub`` whose matrix already contains slack and artificial
columns, and maintain an explicit dense basis inverse.

Variable status codes: 0 nonbasic at lower bound, 1 nonbasic at upper bound,
2 basic. Return codes: 0 phase optimal, 1 unbounded, 2 iteration limit,
3 refactorization requested.
"""

from __future__ import annotations

import numpy as np
import scipy.sparse as sp
from scipy.linalg.blas import dger

NB_LB, NB_UB, BASIC = 0, 1, 2

PHASE_OPTIMAL = 0
PHASE_UNBOUNDED = 1
PHASE_ITER_LIMIT = 2
PHASE_REFACTOR = 3

_DEGEN_STEP = 1e-12
_TIE_TOL = 1e-12


def run_phase(a_data, a_indices, a_indptr, c, lb, ub, basis, vstat, x, binv,
              max_iter, refactor_every, tol_dj, tol_piv, stall_limit, bland):
    """Pivot until the phase ends. Mutates basis/vstat/x/binv in place.

    Returns (code, iterations, bland, entering, direction); the last two
    identify the unbounded column when code == 1.
    """
    m = binv.shape[0]
    n = c.shape[0]
    A = sp.csc_matrix((a_data, a_indices, a_indptr), shape=(m, n), copy=False)
    AT = A.T.tocsr(copy=False)
    movable = ub > lb
    iters = 0
    pivots = 0
    degen = 0

    while True:
        if iters >= max_iter:
            return PHASE_ITER_LIMIT, iters, bland, -1, 0

        # pricing: y = binv^T c_B, reduced costs z = c - A^T y
        y = binv.T @ c[basis]
        z = c - AT @ y
        elig_lb = (vstat == NB_LB) & movable & (z < -tol_dj)
        elig_ub = (vstat == NB_UB) & (z > tol_dj)
        eligible = elig_lb | elig_ub
        if not eligible.any():
            return PHASE_OPTIMAL, iters, bland, -1, 0
        if bland:
            q = int(np.argmax(eligible))
        else:
            score = np.where(eligible, np.abs(z), -1.0)
            q = int(np.argmax(score))
        direction = 1 if vstat[q] == NB_LB else -1

        # ftran: w = binv @ A[:, q], accumulated in storage order
        w = np.zeros(m)
        for k in range(a_indptr[q], a_indptr[q + 1]):
            w += a_data[k] * binv[:, a_indices[k]]

        # bounded-variable ratio test
        wd = direction * w
        xb = x[basis]
        t_hit_lb = np.where(wd > tol_piv, np.maximum(xb - lb[basis], 0.0) / np.where(wd > tol_piv, wd, 1.0), np.inf)
        ub_b = ub[basis]
        neg_ok = (wd < -tol_piv) & np.isfinite(ub_b)
        t_hit_ub = np.where(neg_ok, np.maximum(ub_b - xb, 0.0) / np.where(neg_ok, -wd, 1.0), np.inf)
        t_all = np.minimum(t_hit_lb, t_hit_ub)
        t_min = float(t_all.min()) if m else np.inf

        t_flip = ub[q] - lb[q]
        if t_min == np.inf:
            if np.isinf(t_flip):
                return PHASE_UNBOUNDED, iters, bland, q, direction
            do_flip = True
        else:
            do_flip = t_flip < t_min - _TIE_TOL

        if do_flip:
            x[basis] = xb - direction * t_flip * w
            x[q] = ub[q] if vstat[q] == NB_LB else lb[q]
            vstat[q] = NB_UB if vstat[q] == NB_LB else NB_LB
            iters += 1
            degen = 0
            continue

        sel = t_all <= t_min + _TIE_TOL
        cand = np.flatnonzero(sel)
        if bland:
            r = int(cand[np.argmin(basis[cand])])
        else:
            r = int(cand[np.argmax(np.abs(wd[cand]))])
        leave = int(basis[r])
        leaves_to_ub = t_hit_ub[r] <= t_hit_lb[r]
        t = float(t_all[r])

        x[basis] = xb - direction * t * w
        x[leave] = ub[leave] if leaves_to_ub else lb[leave]
        x[q] = (lb[q] + t) if direction == 1 else (ub[q] - t)
        vstat[leave] = NB_UB if leaves_to_ub else NB_LB
        vstat[q] = BASIC
        basis[r] = q

        # rank-1 update of the basis inverse
        piv = w[r]
        g = w / piv
        g[r] = 1.0 - 1.0 / piv
        er = binv[r, :].copy()
        ret = dger(-1.0, g, er, a=binv, overwrite_a=1)
        if ret is not binv:  # only if the caller passed a non F-contiguous array
            binv[:, :] = ret

        iters += 1
        pivots += 1
        if t <= _DEGEN_STEP:
            degen += 1
            if degen > stall_limit:
                bland = 1
        else:
            degen = 0
        if pivots >= refactor_every:
            return PHASE_REFACTOR, iters, bland, -1, 0
