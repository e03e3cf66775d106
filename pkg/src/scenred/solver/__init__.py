"""Self-contained LP and mixed-binary solver used by every subproblem."""

from .branch_bound import solve_mip
from .kernels import BACKEND
from .model import (
    EQ,
    GEQ,
    LEQ,
    LinearProgram,
    MalformedProgramError,
    MixedBinaryProgram,
    NumericalError,
    SolveResult,
    SolverLimits,
    Status,
    dump_program,
)
from .simplex import ComputationalForm, solve_lp

__all__ = [
    "BACKEND",
    "ComputationalForm",
    "EQ",
    "GEQ",
    "LEQ",
    "LinearProgram",
    "MalformedProgramError",
    "MixedBinaryProgram",
    "NumericalError",
    "SolveResult",
    "SolverLimits",
    "Status",
    "dump_program",
    "solve_lp",
    "solve_mip",
]
