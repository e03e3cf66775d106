# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled twin of ``_kernel_py``: the bounded-variable simplex pivot loop.

Pivot rules, tolerances, and tie-breaking mirror the pure-numpy backend; both
maintain a dense basis inverse updated by a rank-1 BLAS call.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport INFINITY, fabs
from scipy.linalg.cython_blas cimport dger

cnp.import_array()

NB_LB, NB_UB, BASIC = 0, 1, 2
PHASE_OPTIMAL = 0
PHASE_UNBOUNDED = 1
PHASE_ITER_LIMIT = 2
PHASE_REFACTOR = 3

cdef double _DEGEN_STEP = 1e-12
cdef double _TIE_TOL = 1e-12

cdef int C_NB_LB = 0
cdef int C_NB_UB = 1
cdef int C_BASIC = 2


def run_phase(double[::1] a_data, int[::1] a_indices, int[::1] a_indptr,
              double[::1] c, double[::1] lb, double[::1] ub,
              int[::1] basis, signed char[::1] vstat, double[::1] x,
              double[::1, :] binv,
              long max_iter, long refactor_every,
              double tol_dj, double tol_piv, long stall_limit, int bland):
    """See ``scenred.solver._kernel_py.run_phase``."""
    cdef Py_ssize_t m = binv.shape[0]
    cdef Py_ssize_t n = c.shape[0]
    cdef long iters = 0, pivots = 0, degen = 0
    cdef Py_ssize_t i, j, k, q, r, leave
    cdef int direction, leaves_to_ub
    cdef double zj, best_score, yv, t_min, t_flip, t, wd_i, piv, xq
    cdef double[::1] y = np.empty(m)
    cdef double[::1] w = np.empty(m)
    cdef double[::1] g = np.empty(m)
    cdef double[::1] er = np.empty(m)
    cdef double[::1] cb = np.empty(m)
    cdef int inc = 1
    cdef int mm = <int> m
    cdef double alpha = -1.0
    cdef double t_i, best_w, ratio_num
    cdef Py_ssize_t best_var
    cdef int hit_ub_i, do_flip

    while True:
        if iters >= max_iter:
            return PHASE_ITER_LIMIT, iters, bland, -1, 0

        # y = binv^T c_B  (manual, column-wise over the F-ordered inverse)
        for i in range(m):
            cb[i] = c[basis[i]]
        for j in range(m):
            yv = 0.0
            for i in range(m):
                yv += binv[i, j] * cb[i]
            y[j] = yv

        # pricing: reduced cost per nonbasic column
        q = -1
        best_score = -1.0
        for j in range(n):
            if vstat[j] == C_BASIC or ub[j] <= lb[j]:
                continue
            zj = c[j]
            for k in range(a_indptr[j], a_indptr[j + 1]):
                zj -= a_data[k] * y[a_indices[k]]
            if vstat[j] == C_NB_LB:
                if zj < -tol_dj:
                    if bland:
                        q = j
                        break
                    if fabs(zj) > best_score:
                        best_score = fabs(zj)
                        q = j
            else:
                if zj > tol_dj:
                    if bland:
                        q = j
                        break
                    if fabs(zj) > best_score:
                        best_score = fabs(zj)
                        q = j
        if q < 0:
            return PHASE_OPTIMAL, iters, bland, -1, 0
        direction = 1 if vstat[q] == C_NB_LB else -1

        # ftran: w = binv @ A[:, q] in storage order
        for i in range(m):
            w[i] = 0.0
        for k in range(a_indptr[q], a_indptr[q + 1]):
            piv = a_data[k]
            j = a_indices[k]
            for i in range(m):
                w[i] += piv * binv[i, j]

        # bounded ratio test
        t_min = INFINITY
        r = -1
        best_w = -1.0
        best_var = -1
        leaves_to_ub = 0
        for i in range(m):
            wd_i = direction * w[i]
            leave = basis[i]
            if wd_i > tol_piv:
                ratio_num = x[leave] - lb[leave]
                if ratio_num < 0.0:
                    ratio_num = 0.0
                t_i = ratio_num / wd_i
                hit_ub_i = 0
            elif wd_i < -tol_piv and ub[leave] != INFINITY:
                ratio_num = ub[leave] - x[leave]
                if ratio_num < 0.0:
                    ratio_num = 0.0
                t_i = ratio_num / (-wd_i)
                hit_ub_i = 1
            else:
                continue
            if t_i < t_min - _TIE_TOL:
                t_min = t_i
                r = i
                best_w = fabs(wd_i)
                best_var = leave
                leaves_to_ub = hit_ub_i
            elif t_i <= t_min + _TIE_TOL:
                if t_i < t_min:
                    t_min = t_i
                if bland:
                    if leave < best_var:
                        r = i
                        best_var = leave
                        best_w = fabs(wd_i)
                        leaves_to_ub = hit_ub_i
                else:
                    if fabs(wd_i) > best_w:
                        r = i
                        best_var = leave
                        best_w = fabs(wd_i)
                        leaves_to_ub = hit_ub_i

        t_flip = ub[q] - lb[q]
        if r < 0:
            if t_flip == INFINITY:
                return PHASE_UNBOUNDED, iters, bland, q, direction
            do_flip = True
        else:
            do_flip = t_flip < t_min - _TIE_TOL

        if do_flip:
            for i in range(m):
                x[basis[i]] -= direction * t_flip * w[i]
            x[q] = ub[q] if vstat[q] == C_NB_LB else lb[q]
            vstat[q] = C_NB_UB if vstat[q] == C_NB_LB else C_NB_LB
            iters += 1
            degen = 0
            continue

        t = t_min
        leave = basis[r]
        for i in range(m):
            x[basis[i]] -= direction * t * w[i]
        x[leave] = ub[leave] if leaves_to_ub else lb[leave]
        x[q] = (lb[q] + t) if direction == 1 else (ub[q] - t)
        vstat[leave] = C_NB_UB if leaves_to_ub else C_NB_LB
        vstat[q] = C_BASIC
        basis[r] = <int> q

        piv = w[r]
        for i in range(m):
            g[i] = w[i] / piv
        g[r] = 1.0 - 1.0 / piv
        for i in range(m):
            er[i] = binv[r, i]
        dger(&mm, &mm, &alpha, &g[0], &inc, &er[0], &inc, &binv[0, 0], &mm)

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
