import itertools

import numpy as np
import pytest
import scipy.sparse as sp

from scenred.solver import (
    LinearProgram,
    MixedBinaryProgram,
    SolverLimits,
    Status,
    solve_lp,
    solve_mip,
)


def make_lp(c, A, senses, b, lo, hi):
    return LinearProgram(
        objective=c, matrix=sp.csc_matrix(np.asarray(A, dtype=float)),
        senses=senses, rhs=b, lower=lo, upper=hi,
    )


def brute_force(mip):
    """Enumerate all binary assignments, solving the continuous rest."""
    lp = mip.lp
    best = np.inf
    for combo in itertools.product([0.0, 1.0], repeat=mip.binary.size):
        lo, hi = lp.lower.copy(), lp.upper.copy()
        lo[mip.binary] = combo
        hi[mip.binary] = combo
        sub = solve_lp(LinearProgram(objective=lp.objective, matrix=lp.matrix,
                                     senses=lp.senses, rhs=lp.rhs, lower=lo, upper=hi))
        if sub.status == Status.OPTIMAL:
            best = min(best, sub.objective)
    return best


def test_binary_knapsack():
    mip = MixedBinaryProgram(
        lp=make_lp([-2.0, -3.0], [[1.0, 1.0]], ["<"], [1.0], [0.0, 0.0], [1.0, 1.0]),
        binary=[0, 1],
    )
    res = solve_mip(mip)
    assert res.status == Status.OPTIMAL
    assert res.objective == pytest.approx(-3.0, abs=1e-9)
    assert res.x[1] == pytest.approx(1.0, abs=1e-9)


def test_gap_and_bound_consistency():
    rng = np.random.default_rng(0)
    for _ in range(40):
        n = int(rng.integers(2, 7))
        m = int(rng.integers(1, 6))
        A = np.round(rng.normal(0, 1, size=(m, n)), 3)
        c = np.round(rng.normal(0, 1, size=n), 3)
        b = np.round(rng.normal(0, 2, size=m), 3)
        senses = rng.choice(["<", ">"], size=m)
        hi = np.ones(n) * 3.0
        nb = int(rng.integers(1, n + 1))
        bins = np.sort(rng.choice(n, size=nb, replace=False))
        hi[bins] = 1.0
        mip = MixedBinaryProgram(
            lp=make_lp(c, A, senses, b, np.zeros(n), hi), binary=bins
        )
        res = solve_mip(mip)
        if res.status == Status.OPTIMAL:
            assert res.best_bound <= res.objective + 1e-9
            assert res.rel_gap >= 0.0
            assert res.rel_gap <= 1e-6 + 1e-12
            frac = np.abs(res.x[bins] - np.round(res.x[bins]))
            assert np.all(frac <= 1e-6)


def test_matches_brute_force_enumeration():
    rng = np.random.default_rng(123)
    matched = 0
    for _ in range(40):
        n = int(rng.integers(2, 6))
        m = int(rng.integers(1, 5))
        A = np.round(rng.normal(0, 1, size=(m, n)), 3)
        c = np.round(rng.normal(0, 1, size=n), 3)
        b = np.round(rng.normal(0, 2, size=m), 3)
        senses = rng.choice(["<", ">"], size=m)
        hi = np.ones(n) * 2.0
        nb = int(rng.integers(1, n + 1))
        bins = np.sort(rng.choice(n, size=nb, replace=False))
        hi[bins] = 1.0
        mip = MixedBinaryProgram(lp=make_lp(c, A, senses, b, np.zeros(n), hi), binary=bins)
        res = solve_mip(mip)
        best = brute_force(mip)
        if best == np.inf:
            assert res.status == Status.INFEASIBLE
        else:
            assert res.status == Status.OPTIMAL
            assert res.objective == pytest.approx(best, abs=1e-7, rel=1e-7)
            matched += 1
    assert matched >= 20


def test_infeasible_mip():
    mip = MixedBinaryProgram(
        lp=make_lp([1.0], [[1.0], [1.0]], [">", "<"], [0.6, 0.4], [0.0], [1.0]),
        binary=[0],
    )
    res = solve_mip(mip)
    assert res.status == Status.INFEASIBLE


def test_node_limit_returns_honest_gap():
    rng = np.random.default_rng(17)
    n = 12
    A = np.round(rng.uniform(0.2, 1.0, size=(1, n)), 3)
    c = -np.round(rng.uniform(0.5, 1.5, size=n), 3)
    mip = MixedBinaryProgram(
        lp=make_lp(c, A, ["<"], [float(A.sum() / 2)], np.zeros(n), np.ones(n)),
        binary=np.arange(n),
    )
    res = solve_mip(mip, SolverLimits(max_nodes=2))
    assert res.status in (Status.NODE_LIMIT, Status.OPTIMAL)
    if res.status == Status.NODE_LIMIT and res.objective is not None:
        assert res.best_bound <= res.objective + 1e-9
        assert res.rel_gap >= 0.0


def test_incumbent_hint_preserves_optimum():
    mip = MixedBinaryProgram(
        lp=make_lp([-2.0, -3.0], [[1.0, 1.0]], ["<"], [1.0], [0.0, 0.0], [1.0, 1.0]),
        binary=[0, 1],
    )
    hint = np.array([1.0, 0.0])  # feasible but suboptimal
    res = solve_mip(mip, incumbent_hint=hint)
    assert res.status == Status.OPTIMAL
    assert res.objective == pytest.approx(-3.0, abs=1e-9)


def test_branch_priority_accepted():
    mip = MixedBinaryProgram(
        lp=make_lp([-1.0, -1.0], [[1.0, 1.0]], ["<"], [1.0], [0.0, 0.0], [1.0, 1.0]),
        binary=[0, 1],
        branch_priority=[5, 1],
    )
    res = solve_mip(mip)
    assert res.status == Status.OPTIMAL
    assert res.objective == pytest.approx(-1.0, abs=1e-9)


def test_mip_determinism():
    rng = np.random.default_rng(23)
    n, m = 6, 4
    A = np.round(rng.normal(0, 1, size=(m, n)), 3)
    c = np.round(rng.normal(0, 1, size=n), 3)
    b = np.round(rng.normal(0, 2, size=m), 3)
    mip = MixedBinaryProgram(
        lp=make_lp(c, A, rng.choice(["<", ">"], size=m), b, np.zeros(n), np.ones(n)),
        binary=np.arange(n),
    )
    a = solve_mip(mip).to_canonical_dict()
    b2 = solve_mip(mip).to_canonical_dict()
    assert a == b2
