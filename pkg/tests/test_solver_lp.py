import numpy as np
import pytest
import scipy.sparse as sp
from scipy.optimize import linprog

from scenred.solver import (
    LinearProgram,
    MalformedProgramError,
    SolverLimits,
    Status,
    dump_program,
    solve_lp,
)


def make_lp(c, A, senses, b, lo, hi, offset=0.0):
    return LinearProgram(
        objective=c,
        matrix=sp.csc_matrix(np.asarray(A, dtype=float)),
        senses=senses,
        rhs=b,
        lower=lo,
        upper=hi,
        offset=offset,
    )


def random_lp(rng, n_max=8, m_max=8):
    n = int(rng.integers(1, n_max + 1))
    m = int(rng.integers(1, m_max + 1))
    A = np.round(rng.normal(0, 1, size=(m, n)), 3)
    c = np.round(rng.normal(0, 1, size=n), 3)
    b = np.round(rng.normal(0, 2, size=m), 3)
    senses = rng.choice(["<", "=", ">"], size=m)
    lo = np.zeros(n)
    hi = np.full(n, float(rng.uniform(1, 10)))
    return make_lp(c, A, senses, b, lo, hi)


def linprog_reference(lp):
    A = lp.matrix.toarray()
    A_ub, b_ub, A_eq, b_eq = [], [], [], []
    for i in range(lp.n_rows):
        if lp.senses[i] == "<":
            A_ub.append(A[i]); b_ub.append(lp.rhs[i])
        elif lp.senses[i] == ">":
            A_ub.append(-A[i]); b_ub.append(-lp.rhs[i])
        else:
            A_eq.append(A[i]); b_eq.append(lp.rhs[i])
    return linprog(
        lp.objective,
        A_ub=np.array(A_ub) if A_ub else None,
        b_ub=np.array(b_ub) if b_ub else None,
        A_eq=np.array(A_eq) if A_eq else None,
        b_eq=np.array(b_eq) if b_eq else None,
        bounds=list(zip(lp.lower, lp.upper)),
        method="highs",
    )


def enumerate_vertices(lp):
    """Brute-force vertex enumeration for small boxed LPs.

    Every vertex is the intersection of n active constraints drawn from rows
    (as equalities) and variable bounds; infeasible candidates are discarded.
    """
    import itertools

    n = lp.n_cols
    A = lp.matrix.toarray()
    rows = [(A[i], lp.rhs[i]) for i in range(lp.n_rows)]
    for j in range(n):
        e = np.zeros(n); e[j] = 1.0
        rows.append((e, lp.lower[j]))
        rows.append((e, lp.upper[j]))
    best = np.inf
    feasible = False
    for combo in itertools.combinations(range(len(rows)), n):
        M = np.array([rows[k][0] for k in combo])
        rhs = np.array([rows[k][1] for k in combo])
        if abs(np.linalg.det(M)) < 1e-10:
            continue
        x = np.linalg.solve(M, rhs)
        if np.any(x < lp.lower - 1e-8) or np.any(x > lp.upper + 1e-8):
            continue
        r = A @ x - lp.rhs
        ok = True
        for i in range(lp.n_rows):
            if lp.senses[i] == "<" and r[i] > 1e-8:
                ok = False
            elif lp.senses[i] == ">" and r[i] < -1e-8:
                ok = False
            elif lp.senses[i] == "=" and abs(r[i]) > 1e-8:
                ok = False
        if ok:
            feasible = True
            best = min(best, float(lp.objective @ x))
    return feasible, best


def test_one_variable_lp():
    lp = make_lp([-1.0], [[1.0]], ["<"], [1.0], [0.0], [np.inf])
    res = solve_lp(lp)
    assert res.status == Status.OPTIMAL
    assert res.x[0] == pytest.approx(1.0, abs=1e-9)
    assert res.objective == pytest.approx(-1.0, abs=1e-9)


def test_contradictory_bounds_infeasible():
    lp = make_lp([1.0], [[1.0], [1.0]], [">", "<"], [2.0, 1.0], [0.0], [np.inf])
    res = solve_lp(lp)
    assert res.status == Status.INFEASIBLE
    assert res.certificate is not None


def test_unbounded_with_ray():
    lp = make_lp([-1.0, 0.0], [[0.0, 1.0]], ["<"], [1.0], [0.0, 0.0], [np.inf, np.inf])
    res = solve_lp(lp)
    assert res.status == Status.UNBOUNDED
    ray = res.certificate["ray"]
    assert lp.objective @ ray < -1e-9


def test_malformed_rejected():
    with pytest.raises(MalformedProgramError):
        make_lp([1.0, 2.0], [[1.0]], ["<"], [1.0], [0.0], [1.0])
    with pytest.raises(MalformedProgramError):
        make_lp([np.nan], [[1.0]], ["<"], [1.0], [0.0], [1.0])
    with pytest.raises(MalformedProgramError):
        make_lp([1.0], [[1.0]], ["<"], [1.0], [2.0], [1.0])  # lower > upper
    with pytest.raises(MalformedProgramError):
        make_lp([1.0], [[1.0]], ["?"], [1.0], [0.0], [1.0])


def test_offset_carried_into_objective():
    lp = make_lp([1.0], [[1.0]], [">"], [2.0], [0.0], [5.0], offset=10.0)
    res = solve_lp(lp)
    assert res.objective == pytest.approx(12.0, abs=1e-9)


def test_random_lps_match_vertex_enumeration():
    rng = np.random.default_rng(2024)
    checked = 0
    for _ in range(100):
        lp = random_lp(rng, n_max=4, m_max=5)
        feasible, best = enumerate_vertices(lp)
        res = solve_lp(lp)
        if feasible:
            assert res.status == Status.OPTIMAL
            assert res.objective == pytest.approx(best, abs=1e-6, rel=1e-6)
        else:
            assert res.status == Status.INFEASIBLE
        checked += 1
    assert checked == 100


def test_random_lps_match_scipy():
    rng = np.random.default_rng(7)
    for _ in range(100):
        lp = random_lp(rng)
        res = solve_lp(lp)
        ref = linprog_reference(lp)
        if ref.status == 0:
            assert res.status == Status.OPTIMAL
            assert res.objective == pytest.approx(ref.fun, abs=1e-6, rel=1e-6)
        elif ref.status == 2:
            assert res.status == Status.INFEASIBLE


def test_duality_identity_on_random_optima():
    rng = np.random.default_rng(11)
    seen = 0
    for _ in range(150):
        lp = random_lp(rng)
        res = solve_lp(lp)
        if res.status != Status.OPTIMAL:
            continue
        seen += 1
        dual_value = res.duals @ lp.rhs + res.reduced_costs @ res.x
        assert dual_value == pytest.approx(res.objective, rel=1e-6, abs=1e-6)
        for i in range(lp.n_rows):
            if lp.senses[i] == "<":
                assert res.duals[i] <= 1e-7
            elif lp.senses[i] == ">":
                assert res.duals[i] >= -1e-7
    assert seen >= 30


def test_feasibility_of_optimal_solutions():
    rng = np.random.default_rng(5)
    for _ in range(60):
        lp = random_lp(rng)
        res = solve_lp(lp)
        if res.status != Status.OPTIMAL:
            continue
        x = res.x
        assert np.all(x >= lp.lower - 1e-7)
        assert np.all(x <= lp.upper + 1e-7)
        r = lp.matrix @ x - lp.rhs
        for i in range(lp.n_rows):
            if lp.senses[i] == "<":
                assert r[i] <= 1e-6
            elif lp.senses[i] == ">":
                assert r[i] >= -1e-6
            else:
                assert abs(r[i]) <= 1e-6


def test_deterministic_repeat_solves():
    rng = np.random.default_rng(3)
    lp = random_lp(rng)
    a = solve_lp(lp).to_canonical_dict()
    b = solve_lp(lp).to_canonical_dict()
    assert a == b


def test_iteration_limit_reported():
    rng = np.random.default_rng(9)
    lp = random_lp(rng)
    res = solve_lp(lp, SolverLimits(max_lp_iterations=1))
    assert res.status in (Status.ITERATION_LIMIT, Status.OPTIMAL, Status.INFEASIBLE)
    if res.status == Status.ITERATION_LIMIT:
        assert res.objective is None


def test_dump_program_format():
    lp = make_lp([1.0, 0.0], [[1.0, 2.0]], ["<"], [3.0], [0.0, 0.0], [1.0, np.inf])
    text = dump_program(lp)
    lines = text.strip().split("\n")
    assert lines[0].startswith("min ")
    assert lines[1].startswith("r0:")
    assert "<=" in lines[1]
    assert any(line.startswith("b1:") for line in lines)
    # stable across calls
    assert text == dump_program(lp)
