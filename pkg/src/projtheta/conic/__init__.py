"""Dense conic interior-point solver (PSD blocks and a nonnegative orthant)."""
from .cones import smat, svec, svec_dim, svec_offset
from .ipm import solve_conic
from .presolve import drop_dependent_rows
from .program import (ConeSpec, ConicProgram, Residuals, Solution, SolverConfig,
                      compute_residuals)

__all__ = ["ConeSpec", "ConicProgram", "Residuals", "Solution", "SolverConfig",
           "compute_residuals", "drop_dependent_rows", "smat", "solve_conic", "svec",
           "svec_dim", "svec_offset"]
