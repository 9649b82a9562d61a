"""Dense primal-dual interior-point method for linear programs over a
product of PSD cones and a nonnegative orthant.

The iteration works on the homogeneous self-dual embedding

    A x - b tau = 0,   A^T y + z - c tau = 0,   b^T y - c^T x - kappa = 0,

with Nesterov-Todd scaling and Mehrotra predictor-corrector steps.  The
embedding is always feasible, so the same loop either converges to an
optimal pair (tau > 0) or to an infeasibility certificate (kappa > 0).
"""
from __future__ import annotations

import logging

import numpy as np
import scipy.linalg as sla

from .cones import PsdScaling, smat, svec, symmetric_kron
from .presolve import drop_dependent_rows
from .program import ConicProgram, Solution, SolverConfig

log = logging.getLogger(__name__)


class _Scaling:
    """Blockwise NT scaling at the current interior pair ``(x, z)``.

    After the first iteration the scaling is never recomputed from ``x`` and
    ``z``; instead the new scaled pair ``lam + alpha W dx``,
    ``lam + alpha W^{-T} dz`` is scaled again and the two scalings are
    composed, which keeps relative accuracy as ``x`` and ``z`` approach the
    boundary.
    """

    def __init__(self, cone, psd, d, lam_nn):
        self.cone = cone
        self.psd = psd
        self.nn = cone.nonneg_slice
        self.d = d                              # W on the orthant
        self.lam_nn = lam_nn

    @classmethod
    def at(cls, cone, x, z):
        psd = [(sl, PsdScaling.compute(smat(x[sl]), smat(z[sl])))
               for sl in cone.psd_slices()]
        nn = cone.nonneg_slice
        xn, zn = x[nn], z[nn]
        return cls(cone, psd, np.sqrt(zn / xn), np.sqrt(xn * zn))

    def updated(self, alpha, wdx, wdz):
        psd = []
        for sl, sc in self.psd:
            lam = np.diag(sc.lam)
            st = lam + alpha * smat(wdx[sl])
            zt = lam + alpha * smat(wdz[sl])
            inner = PsdScaling.compute(st, zt)
            psd.append((sl, PsdScaling(sc.r @ inner.r, inner.rinv @ sc.rinv, inner.lam)))
        st = self.lam_nn + alpha * wdx[self.nn]
        zt = self.lam_nn + alpha * wdz[self.nn]
        return _Scaling(self.cone, psd, self.d * np.sqrt(zt / st), np.sqrt(st * zt))

    def _map(self, v, psd_fn, nn_fn):
        out = np.empty_like(v)
        for sl, sc in self.psd:
            out[sl] = svec(psd_fn(sc, smat(v[sl])))
        out[self.nn] = nn_fn(v[self.nn])
        return out

    def wit(self, dz):
        return self._map(dz, PsdScaling.scale_dual, lambda v: v / self.d)

    def winv(self, u):
        return self._map(u, lambda sc, m: sc.r @ m @ sc.r.T, lambda v: v / self.d)

    def lam_inv_prod(self, r):
        """``u`` with ``lam o u = r``."""
        return self._map(r, PsdScaling.lyap_solve, lambda v: v / self.lam_nn)

    def lam_sq(self):
        out = np.empty(self.cone.dim)
        for sl, sc in self.psd:
            out[sl] = svec(np.diag(sc.lam ** 2))
        out[self.nn] = self.lam_nn ** 2
        return out

    def jordan(self, a, b):
        out = np.empty_like(a)
        for sl, _ in self.psd:
            ma, mb = smat(a[sl]), smat(b[sl])
            out[sl] = svec(0.5 * (ma @ mb + mb @ ma))
        out[self.nn] = a[self.nn] * b[self.nn]
        return out

    def max_step(self, scaled_dir):
        step = np.inf
        for sl, sc in self.psd:
            step = min(step, sc.max_step(smat(scaled_dir[sl])))
        d = scaled_dir[self.nn]
        neg = d < 0
        if neg.any():
            step = min(step, float(np.min(-self.lam_nn[neg] / d[neg])))
        return step

    def scaled_rows(self, A):
        """``A W^{-1}``; the Schur complement is ``B B^T`` for this ``B``."""
        B = np.empty_like(A)
        for sl, sc in self.psd:
            B[:, sl] = A[:, sl] @ symmetric_kron(sc.r)
        B[:, self.nn] = A[:, self.nn] / self.d
        return B


class _Factor:
    """Factor of ``M = B B^T`` from a QR decomposition of ``B^T``.

    Working with ``B`` rather than forming ``M`` avoids squaring its
    condition number, which matters once the NT scaling becomes extreme.
    """

    def __init__(self, B):
        self.B = B
        rq = sla.qr(B.T, mode="r")[0][: B.shape[0]]
        d = np.abs(np.diag(rq))
        if d.size and (not np.all(np.isfinite(rq)) or d.min() <= 1e-14 * d.max()):
            raise np.linalg.LinAlgError("scaled constraint matrix is rank deficient")
        self.rq = rq

    def solve(self, r):
        t = sla.solve_triangular(self.rq, r, trans="T")
        return sla.solve_triangular(self.rq, t)


def _hsde(A, b, c, cone, cfg: SolverConfig, full=None):
    """Run the embedding; ``full = (A0, b0)`` is the unreduced system used for the primal stopping test."""
    m, nvar = A.shape
    nu = cone.degree
    e = cone.identity()
    x = (1.0 + np.linalg.norm(b, np.inf)) * e
    z = (1.0 + np.linalg.norm(c, np.inf)) * e
    y = np.zeros(m)
    tau = kappa = 1.0
    A0, b0 = full if full is not None else (A, b)
    nb, nc = np.linalg.norm(b0), np.linalg.norm(c)
    status, it = "max_iterations", 0
    info = {}
    stalls = 0
    sc = None

    for it in range(cfg.max_iter + 1):
        xh, yh, zh = x / tau, y / tau, z / tau
        pres = np.linalg.norm(A0 @ xh - b0) / (1.0 + nb)
        dres = np.linalg.norm(A.T @ yh + zh - c) / (1.0 + nc)
        pobj, dobj = c @ xh, b @ yh
        gap = abs(pobj - dobj) / (1.0 + abs(pobj))
        info = {"pres": pres, "dres": dres, "gap": gap, "tau": tau, "kappa": kappa}
        log.debug("it %3d pobj %+.10e dobj %+.10e pres %.2e dres %.2e gap %.2e tau %.2e kappa %.2e",
                  it, pobj, dobj, pres, dres, gap, tau, kappa)
        if pres <= cfg.feas_tol and dres <= cfg.feas_tol and gap <= cfg.gap_tol:
            status = "optimal"
            break
        if tau < kappa:
            by, cx = b @ y, c @ x
            if by > 0 and np.linalg.norm(A.T @ y + z) <= cfg.feas_tol * by:
                status = "infeasible"
                break
            if cx < 0 and np.linalg.norm(A @ x) <= cfg.feas_tol * -cx:
                status = "unbounded"
                break
        if it == cfg.max_iter:
            break

        rp = tau * b - A @ x
        rd = tau * c - A.T @ y - z
        rg = c @ x - b @ y + kappa
        mu = (x @ z + tau * kappa) / (nu + 1)

        try:
            if sc is None:
                sc = _Scaling.at(cone, x, z)
            fac = _Factor(sc.scaled_rows(A))
        except (np.linalg.LinAlgError, ValueError, FloatingPointError):
            status = "numerical_failure"
            break
        # The Newton system is solved in NT-scaled variables dxs = W dx and
        # dzs = W^-T dz, where it reads
        #   B dxs - b dtau = r1,  B^T dy + dzs - cs dtau = W^-T r2,
        #   -cs.dxs + b.dy - dkappa = r3,  dxs + dzs = u,  kappa dtau + tau dkappa = r5
        # with B = A W^-1 and cs = W^-T c.  Nothing of size cond(W)^2 is formed.
        B = fac.B
        cs = sc.wit(c)
        y1 = fac.solve(B @ cs)
        rcs = cs - B.T @ y1
        y2 = fac.solve(b)
        p = y1 + y2
        denom = rcs @ rcs + b @ y2 + kappa / tau

        def solve_scaled(r1, r2s, r3, u, r5):
            q = fac.solve(r1 + B @ (r2s - u))
            e0 = B.T @ q - r2s + u
            dtau = (r3 + cs @ e0 - b @ q + r5 / tau) / denom
            dy = q + p * dtau
            dxs = e0 + (B.T @ p - cs) * dtau
            dkappa = (r5 - kappa * dtau) / tau
            return dxs, dy, u - dxs, dtau, dkappa

        def direction(eta, rc, rtk):
            rhs = (eta * rp, sc.wit(eta * rd), eta * rg, sc.lam_inv_prod(rc), rtk)
            d = solve_scaled(*rhs)
            for _ in range(2):
                dxs, dy, dzs, dtau, dkappa = d
                err = (rhs[0] - (B @ dxs - b * dtau),
                       rhs[1] - (B.T @ dy + dzs - cs * dtau),
                       rhs[2] - (-cs @ dxs + b @ dy - dkappa),
                       rhs[3] - (dxs + dzs),
                       rhs[4] - (kappa * dtau + tau * dkappa))
                corr = solve_scaled(*err)
                d = tuple(a + b_ for a, b_ in zip(d, corr))
            dxs, dy, dzs, dtau, dkappa = d
            # dz from the unscaled dual equation keeps dual residuals exact
            dz = eta * rd - A.T @ dy + c * dtau
            return sc.winv(dxs), dy, dz, dtau, dkappa, dxs, dzs

        def step_to_boundary(wdx, wdz, dtau, dkappa):
            a = min(sc.max_step(wdx), sc.max_step(wdz))
            if dtau < 0:
                a = min(a, -tau / dtau)
            if dkappa < 0:
                a = min(a, -kappa / dkappa)
            return a

        lam_sq = sc.lam_sq()
        aff = direction(1.0, -lam_sq, -tau * kappa)
        a_aff = min(1.0, step_to_boundary(*aff[5:], aff[3], aff[4]))
        sigma = (1.0 - a_aff) ** 3
        rc = -lam_sq - sc.jordan(aff[5], aff[6]) + sigma * mu * e
        rtk = -tau * kappa - aff[3] * aff[4] + sigma * mu
        dx, dy, dz, dtau, dkappa, wdx, wdz = direction(1.0 - sigma, rc, rtk)
        if not all(np.all(np.isfinite(v)) for v in (dx, dy, dz)) or not np.isfinite(dtau):
            status = "numerical_failure"
            break
        alpha = min(1.0, cfg.step_fraction * step_to_boundary(wdx, wdz, dtau, dkappa))
        log.debug("    alpha_aff %.3e sigma %.3e alpha %.3e mu %.3e", a_aff, sigma, alpha, mu)
        stalls = stalls + 1 if alpha < 1e-10 else 0
        if stalls >= 5:
            status = "numerical_failure"
            break
        try:
            sc = sc.updated(alpha, wdx, wdz)
        except (np.linalg.LinAlgError, ValueError, FloatingPointError):
            sc = None
        x = x + alpha * dx
        y = y + alpha * dy
        z = z + alpha * dz
        tau = tau + alpha * dtau
        kappa = kappa + alpha * dkappa

    info["iterations"] = it
    return x, y, z, tau, kappa, status, it, info


def solve_conic(p: ConicProgram, cfg: SolverConfig | None = None) -> Solution:
    """Solve ``p``; maximisation is handled by negating the objective."""
    cfg = cfg or SolverConfig()
    sign = 1.0 if p.sense == "min" else -1.0
    m = p.A.shape[0]
    pre = drop_dependent_rows(p.A, p.b, cfg.drop_tol)
    dropped = tuple(int(i) for i in pre.dropped)
    if not pre.consistent:
        zero = np.zeros(p.cone.dim)
        return Solution(zero, np.zeros(m), zero.copy(), np.nan, np.nan, "infeasible", 0,
                        dropped, p.sense, {"reason": "inconsistent dependent rows",
                                           "inconsistency": pre.inconsistency})

    x, y_, z, tau, kappa, status, it, info = _hsde(pre.A, pre.b, sign * p.c, p.cone, cfg, (p.A, p.b))
    if status in ("infeasible", "unbounded"):
        scale = 1.0
    else:
        scale = 1.0 / tau
    y = np.zeros(m)
    y[pre.kept] = y_ / pre.row_scale
    x, y, z = x * scale, sign * y * scale, z * scale
    info["dropped_labels"] = [p.labels[i] for i in dropped]
    return Solution(x, y, z, float(p.c @ x), float(p.b @ y), status, it, dropped, p.sense, info)
