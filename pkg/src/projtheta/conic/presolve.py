"""Removal of linearly dependent equality rows."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla


@dataclass
class Presolved:
    A: np.ndarray
    b: np.ndarray
    kept: np.ndarray          # original indices of the retained rows
    dropped: np.ndarray       # original indices of the dependent rows
    row_scale: np.ndarray     # retained rows were divided by these norms
    consistent: bool
    inconsistency: float


def drop_dependent_rows(A: np.ndarray, b: np.ndarray, tol: float = 1e-10) -> Presolved:
    """Keep a maximal independent subset of the rows of ``A``.

    Rows are normalised to unit length, then a column-pivoted QR of ``A^T``
    orders them by how much new direction they add; rows whose residual norm
    falls to ``tol`` or below are dropped.  The dropped right-hand sides are
    checked against the combination of kept rows that reproduces them.
    """
    m = A.shape[0]
    norms = np.linalg.norm(A, axis=1)
    zero = norms <= tol
    scale = np.where(zero, 1.0, norms)
    an = A / scale[:, None]
    bn = b / scale
    live = np.flatnonzero(~zero)
    if live.size:
        _, r, piv = sla.qr(an[live].T, mode="economic", pivoting=True)
        diag = np.abs(np.diag(r))
        rank = int(np.sum(diag > tol))
        kept = np.sort(live[piv[:rank]])
    else:
        kept = live
    dropped = np.setdiff1d(np.arange(m), kept)

    worst = 0.0
    if dropped.size:
        if kept.size:
            coef, *_ = np.linalg.lstsq(an[kept].T, an[dropped].T, rcond=None)
            implied = coef.T @ bn[kept]
        else:
            implied = np.zeros(dropped.size)
        worst = float(np.max(np.abs(implied - bn[dropped]))) if dropped.size else 0.0
    consistent = worst <= 1e-8 * (1.0 + np.linalg.norm(bn, np.inf))
    return Presolved(an[kept], bn[kept], kept, dropped, scale[kept], consistent, worst)
