"""Symmetric vectorisation and Nesterov-Todd scalings for the PSD and
nonnegative cones.

``svec`` stacks the upper triangle row by row with off-diagonal entries
multiplied by sqrt(2), so ``svec(X) @ svec(Y) == trace(X @ Y)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
import scipy.linalg as sla

SQRT2 = np.sqrt(2.0)


def svec_dim(s: int) -> int:
    return s * (s + 1) // 2


@lru_cache(maxsize=None)
def triu_indices(s: int) -> tuple[np.ndarray, np.ndarray]:
    i, j = np.triu_indices(s)
    i.setflags(write=False)
    j.setflags(write=False)
    return i, j


@lru_cache(maxsize=None)
def _offdiag_scale(s: int) -> np.ndarray:
    i, j = triu_indices(s)
    w = np.where(i == j, 1.0, SQRT2)
    w.setflags(write=False)
    return w


def svec_offset(s: int, i: int, j: int) -> int:
    """Position of entry ``(i, j)`` (0-based, any order) inside ``svec``."""
    if i > j:
        i, j = j, i
    return i * s - i * (i - 1) // 2 + (j - i)


def svec(x: np.ndarray) -> np.ndarray:
    s = x.shape[0]
    i, j = triu_indices(s)
    return x[i, j] * _offdiag_scale(s)


def smat(v: np.ndarray) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    s = int(round((np.sqrt(8 * v.size + 1) - 1) / 2))
    if svec_dim(s) != v.size:
        raise ValueError(f"length {v.size} is not a triangular number")
    i, j = triu_indices(s)
    x = np.zeros((s, s))
    x[i, j] = v / _offdiag_scale(s)
    x[j, i] = x[i, j]
    return x


def svec_coefficient(s: int, i: int, j: int) -> float:
    """Coefficient that makes ``a @ svec(X) == X[i, j]`` when placed at :func:`svec_offset`."""
    return 1.0 if i == j else 1.0 / SQRT2


def symmetric_kron(w: np.ndarray) -> np.ndarray:
    """Matrix of ``V -> W V W^T`` in svec coordinates (any square ``W``)."""
    s = w.shape[0]
    i, j = triu_indices(s)
    a = np.where(i == j, 0.5, 1.0 / SQRT2)
    k = w[np.ix_(i, i)] * w[np.ix_(j, j)] + w[np.ix_(i, j)] * w[np.ix_(j, i)]
    return 2.0 * np.outer(a, a) * k


def jordan(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return 0.5 * (a @ b + b @ a)


# ------------------------------------------------------------ scalings

@dataclass
class PsdScaling:
    """NT scaling of one PSD block: ``R^{-1} X R^{-T} = R^T Z R = diag(lam)``."""

    r: np.ndarray
    rinv: np.ndarray
    lam: np.ndarray

    @classmethod
    def compute(cls, x: np.ndarray, z: np.ndarray) -> "PsdScaling":
        lx = _chol(x)
        lz = _chol(z)
        u, lam, vt = sla.svd(lz.T @ lx)
        r = lx @ vt.T / np.sqrt(lam)
        rinv = (u.T @ lz.T) / np.sqrt(lam)[:, None]
        return cls(r, rinv, lam)

    def scale_primal(self, dx):            # W dX
        return self.rinv @ dx @ self.rinv.T

    def scale_dual(self, dz):              # W^{-T} dZ
        return self.r.T @ dz @ self.r

    def adjoint(self, u):                  # W^T U
        return self.rinv.T @ u @ self.rinv

    def hinv_matrix(self) -> np.ndarray:   # dX -> W_nt dX W_nt in svec coordinates
        wnt = self.r @ self.r.T
        return symmetric_kron(0.5 * (wnt + wnt.T))

    def lyap_solve(self, rhs):
        """Solve ``lam o U = rhs`` for ``U``."""
        return 2.0 * rhs / (self.lam[:, None] + self.lam[None, :])

    def max_step(self, scaled_dir) -> float:
        s = 1.0 / np.sqrt(self.lam)
        m = scaled_dir * s[:, None] * s[None, :]
        emin = sla.eigvalsh(0.5 * (m + m.T))[0]
        return np.inf if emin >= 0 else -1.0 / emin


def _chol(x: np.ndarray) -> np.ndarray:
    x = 0.5 * (x + x.T)
    try:
        return sla.cholesky(x, lower=True)
    except sla.LinAlgError:
        w, v = sla.eigh(x)
        w = np.maximum(w, 1e-300)
        q, r = sla.qr((v * np.sqrt(w)).T)
        lower = r.T
        signs = np.sign(np.diag(lower))
        signs[signs == 0] = 1.0
        return lower * signs
