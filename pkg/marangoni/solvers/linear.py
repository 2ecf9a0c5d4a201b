"""Conjugate-gradient solves for the symmetric grid systems."""
from __future__ import annotations

import logging
import math
from typing import TYPE_CHECKING, Final

import msgspec
import numpy as np
from scipy.sparse.linalg import cg

from marangoni.exceptions import LinearSolveError

if TYPE_CHECKING:
    import scipy.sparse as sp

    from marangoni.marangoni_types import FloatArray

logger = logging.getLogger(__name__)

MAX_RESTARTS: Final = 3


class PoissonSolveReport(msgspec.Struct, frozen=True):
    """Outcome of one linear solve.

    - `iterations`: total CG iterations.
    - `residual`: final relative residual `|b - Ax| / |b|`.
    - `converged`: `residual` met the tolerance.
    """

    iterations: int
    residual: float
    converged: bool


def default_maxiter(size: int) -> int:
    """Iteration cap, generous against `sqrt(condition number)`."""
    return 200 + 40 * math.isqrt(size)


def solve_spd(
    matrix: sp.csr_matrix,
    rhs: FloatArray,
    *,
    tol: float,
    atol: float,
    stage: str,
    x0: FloatArray | None = None,
    maxiter: int | None = None,
) -> tuple[FloatArray, PoissonSolveReport]:
    """Solve `matrix x = rhs` by conjugate gradients.

    Iterates until the true residual is below `atol`.
    `atol` must not exceed `tol |rhs|`, so a converged report
    always has relative residual below `tol`.

    ### Parameters:
    - `matrix`: symmetric positive (semi)definite matrix.
    - `rhs`: right side, consistent with the matrix range.
    - `tol`: relative tolerance reported against.
    - `atol`: absolute stopping threshold on `|b - Ax|`.
    - `stage`: step stage, for error tagging.
    - `x0`: warm start.
    - `maxiter`: iteration cap per CG run.

    ### Returns:
    solution and its `PoissonSolveReport`.

    ### Raises:
    - `LinearSolveError`: if the cap is hit before convergence.
    """
    rhs_norm: Final = float(np.linalg.norm(rhs))
    if rhs_norm == 0.0:
        return np.zeros_like(rhs), PoissonSolveReport(
            iterations=0,
            residual=0.0,
            converged=True,
        )

    cap: Final = maxiter or default_maxiter(rhs.size)
    iterations = 0

    def _count(_: FloatArray) -> None:
        nonlocal iterations
        iterations += 1

    solution = np.zeros_like(rhs) if x0 is None else x0.copy()
    residual_norm = float(np.linalg.norm(rhs - matrix @ solution))
    for _ in range(MAX_RESTARTS):
        if residual_norm <= atol:
            break
        solution, info = cg(
            matrix,
            rhs,
            x0=solution,
            rtol=0.0,
            atol=atol,
            maxiter=cap,
            callback=_count,
        )
        residual_norm = float(np.linalg.norm(rhs - matrix @ solution))
        if info > 0:
            break

    report: Final = PoissonSolveReport(
        iterations=iterations,
        residual=residual_norm / rhs_norm,
        converged=residual_norm <= atol,
    )
    logger.debug(
        "%s solve: %d iterations, relative residual %.3e",
        stage,
        report.iterations,
        report.residual,
    )
    if not report.converged:
        solve_err_msg: Final = (
            f"CG did not converge in {iterations} iterations, "
            f"relative residual {report.residual:.3e} > {tol:.3e}"
        )
        raise LinearSolveError(solve_err_msg, stage=stage, report=report)
    return solution, report


def solve_helmholtz(
    matrix: sp.csr_matrix,
    rhs: FloatArray,
    *,
    tol: float,
    stage: str,
    x0: FloatArray | None = None,
) -> FloatArray:
    """Solve a Helmholtz system to RMS-relative accuracy `tol`.

    The matrix has spectrum in `[1, inf)`, so the pointwise error
    stays below `tol * rms(rhs)`.
    """
    rms: Final = float(np.linalg.norm(rhs)) / math.sqrt(rhs.size)
    solution, _ = solve_spd(
        matrix,
        rhs,
        tol=tol,
        atol=tol * rms,
        stage=stage,
        x0=x0,
    )
    return solution
