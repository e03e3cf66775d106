#!/usr/bin/env python3
"""Benchmark the compiled simplex kernel against the pure-numpy fallback.

Runs seeded LP families through both backends, checks that objectives agree,
and prints a timing table. Usage: ``python benchmarks/bench_kernels.py``.
"""

import time

import numpy as np
import scipy.sparse as sp

from scenred.solver import LinearProgram
from scenred.solver.kernels import get_backend
from scenred.solver.simplex import ComputationalForm


def random_lp(m, n, density, seed):
    rng = np.random.default_rng(seed)
    A = sp.random(m, n, density=density, random_state=np.random.RandomState(seed), format="csc")
    A.data = np.round(rng.uniform(0.5, 2.0, A.nnz), 3)
    c = rng.uniform(0.1, 1.0, n)
    b = A @ rng.uniform(0.5, 1.5, n)
    senses = np.array(["<"] * m)
    return LinearProgram(objective=-c, matrix=A, senses=senses, rhs=b,
                         lower=np.zeros(n), upper=np.full(n, 10.0))


def flow_like_lp(n_nodes, n_comm, seed):
    """A transshipment-flavored equality/inequality mix, closer to the
    problems this package actually solves than fully random matrices."""
    rng = np.random.default_rng(seed)
    arcs = [(i, j) for i in range(n_nodes) for j in range(n_nodes) if i != j]
    rng.shuffle(arcs)
    arcs = arcs[: min(len(arcs), 4 * n_nodes)]
    na = len(arcs)
    rows, cols, vals, senses, rhs = [], [], [], [], []
    r = 0
    for k in range(n_comm):
        o, d = rng.choice(n_nodes, size=2, replace=False)
        dem = float(rng.integers(1, 8))
        for v in range(n_nodes):
            for a, (t, h) in enumerate(arcs):
                if t == v:
                    rows.append(r); cols.append(k * na + a); vals.append(1.0)
                if h == v:
                    rows.append(r); cols.append(k * na + a); vals.append(-1.0)
            senses.append("=")
            rhs.append(dem if v == o else (-dem if v == d else 0.0))
            r += 1
    n = n_comm * na
    for a in range(na):
        for k in range(n_comm):
            rows.append(r); cols.append(k * na + a); vals.append(1.0)
        senses.append("<")
        rhs.append(float(rng.integers(10, 40)))
        r += 1
    A = sp.csc_matrix((vals, (rows, cols)), shape=(r, n))
    c = rng.uniform(5, 10, n)
    return LinearProgram(objective=c, matrix=A, senses=np.array(senses), rhs=np.array(rhs),
                         lower=np.zeros(n), upper=np.full(n, np.inf))


def bench(lp, backend, repeats):
    form = ComputationalForm(lp, kernel_backend=backend)
    res = form.solve()
    t0 = time.perf_counter()
    for _ in range(repeats):
        res = form.solve()
    dt = (time.perf_counter() - t0) / repeats
    return res, dt


def main():
    try:
        get_backend("cython")
    except ImportError:
        print("compiled kernel unavailable; build the extension to compare backends")
        return

    cases = [
        ("random  m=60  n=200", random_lp(60, 200, 0.08, 1), 5),
        ("random  m=150 n=400", random_lp(150, 400, 0.05, 2), 3),
        ("flow    m=174 n=696", flow_like_lp(6, 5, 3), 3),
        ("flow    m=539 n=1876", flow_like_lp(7, 11, 4), 1),
    ]
    print(f"{'case':<22} {'iters':>6} {'python':>10} {'cython':>10} {'speedup':>8}")
    for name, lp, repeats in cases:
        res_p, t_p = bench(lp, "python", repeats)
        res_c, t_c = bench(lp, "cython", repeats)
        assert res_p.status == res_c.status, (res_p.status, res_c.status)
        if res_p.objective is not None:
            rel = abs(res_p.objective - res_c.objective) / max(1.0, abs(res_p.objective))
            assert rel < 1e-9, f"backend objectives disagree: {rel}"
        print(f"{name:<22} {res_c.iterations:>6} {t_p*1000:>8.1f}ms {t_c*1000:>8.1f}ms {t_p/t_c:>7.2f}x")


if __name__ == "__main__":
    main()
