import numpy as np
import pytest
import scipy.sparse as sp

from scenred.solver import LinearProgram, Status
from scenred.solver.kernels import BACKEND, get_backend
from scenred.solver.simplex import ComputationalForm


def _random_lp(seed, m=40, n=90):
    rng = np.random.default_rng(seed)
    A = sp.random(m, n, density=0.15, random_state=np.random.RandomState(seed), format="csc")
    A.data = np.round(rng.uniform(0.5, 2.0, A.nnz), 3)
    c = np.round(rng.normal(0, 1, size=n), 3)
    b = np.round(rng.uniform(0.5, 3.0, size=m), 3)
    senses = rng.choice(["<", "=", ">"], size=m, p=[0.6, 0.2, 0.2])
    return LinearProgram(objective=c, matrix=A, senses=senses, rhs=b,
                         lower=np.zeros(n), upper=np.full(n, 4.0))


def _have_compiled():
    try:
        get_backend("cython")
        return True
    except ImportError:
        return False


def test_default_backend_reports_name():
    assert BACKEND in ("cython", "python")


@pytest.mark.skipif(not _have_compiled(), reason="compiled kernel not built")
def test_backends_agree_on_random_lps():
    agree = 0
    for seed in range(25):
        lp = _random_lp(seed)
        res_c = ComputationalForm(lp, kernel_backend="cython").solve()
        res_p = ComputationalForm(lp, kernel_backend="python").solve()
        assert res_c.status == res_p.status
        if res_c.status == Status.OPTIMAL:
            assert res_c.objective == pytest.approx(res_p.objective, rel=1e-9, abs=1e-9)
            agree += 1
    assert agree >= 10


@pytest.mark.skipif(not _have_compiled(), reason="compiled kernel not built")
def test_backends_deterministic_individually():
    lp = _random_lp(3)
    for backend in ("cython", "python"):
        form = ComputationalForm(lp, kernel_backend=backend)
        a = form.solve().to_canonical_dict()
        b = ComputationalForm(lp, kernel_backend=backend).solve().to_canonical_dict()
        assert a == b
