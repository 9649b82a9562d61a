"""Theta-type bounds: Lovász theta (primal and dual forms), the Schrijver and
Szegedy variants, and the projection theta number.

Zero patterns follow one convention throughout.  For a graph ``g``:

* ``theta``/``theta_minus`` zero the entries on edges of ``g`` (upper bounds
  on the stability number of ``g``);
* ``theta_dual``/``theta_plus``/``theta_hat`` zero the entries on
  non-adjacent pairs of ``g``.

So ``theta_hat(complement(h))`` and ``theta_plus(complement(h))`` are lower
bounds on the chromatic number of ``h``, and ``theta(complement(h))`` lies
between its clique and chromatic numbers.

Entrywise nonnegativity is imposed by linking each free off-diagonal entry to
an orthant variable; entries forced to zero are fixed directly.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .conic import (ConicProgram, Residuals, Solution, SolverConfig, compute_residuals,
                    solve_conic)
from .conic.builder import ProgramBuilder
from .conic.cones import svec
from .graph import Graph, clique_union, complement

KINDS = ("theta", "theta_minus", "theta_plus", "theta_hat", "theta_hat_prime")


class SolverError(RuntimeError):
    """A bound evaluation did not reach an optimal, certified solution."""

    def __init__(self, message, solution=None):
        super().__init__(message)
        self.solution = solution


@dataclass
class BoundValue:
    kind: str
    value: float
    solution: Solution = field(repr=False)
    fingerprint: str = field(repr=False, default="")
    residuals: Residuals | None = field(repr=False, default=None)
    program: ConicProgram | None = field(repr=False, default=None)

    @property
    def n(self) -> int:
        return int(self.fingerprint.split(";")[0][2:]) if self.fingerprint else 0


def _pairs(g: Graph):
    for i in range(1, g.n + 1):
        for j in range(i + 1, g.n + 1):
            yield i, j, g.has_edge(i, j)


# ----------------------------------------------------------------- builders

def build_theta_primal(g: Graph) -> ConicProgram:
    """``max <J, X>`` s.t. ``tr X = 1``, ``X_ij = 0`` on edges, ``X`` PSD."""
    pb = ProgramBuilder()
    X = pb.add_psd(g.n)
    pb.add_row(pb.combine(*[(1.0, pb.entry(X, i, i)) for i in range(g.n)]), 1.0, "trace")
    for i, j, adj in _pairs(g):
        if adj:
            pb.add_row(pb.entry(X, i - 1, j - 1), 0.0, f"edge {i}-{j}")
    for i in range(g.n):
        for j in range(g.n):
            pb.add_objective(pb.entry(X, i, j))
    return pb.build("max", f"theta[{g.fingerprint()}]")


def build_theta_dual(g: Graph) -> ConicProgram:
    """``min k`` s.t. ``[[k, 1^T], [1, Y]]`` PSD, ``diag Y = 1``, ``Y_ij = 0`` on non-edges."""
    pb = ProgramBuilder()
    B = pb.add_psd(g.n + 1)
    for i in range(1, g.n + 1):
        pb.add_row(pb.entry(B, 0, i), 1.0, f"border {i}")
    for i in range(1, g.n + 1):
        pb.add_row(pb.entry(B, i, i), 1.0, f"diag {i}")
    for i, j, adj in _pairs(g):
        if not adj:
            pb.add_row(pb.entry(B, i, j), 0.0, f"non-edge {i}-{j}")
    pb.add_objective(pb.entry(B, 0, 0))
    return pb.build("min", f"theta_dual[{g.fingerprint()}]")


def build_theta_minus(g: Graph) -> ConicProgram:
    """Primal theta with ``X >= 0`` added."""
    pb = ProgramBuilder()
    X = pb.add_psd(g.n)
    pb.add_row(pb.combine(*[(1.0, pb.entry(X, i, i)) for i in range(g.n)]), 1.0, "trace")
    for i, j, adj in _pairs(g):
        if adj:
            pb.add_row(pb.entry(X, i - 1, j - 1), 0.0, f"edge {i}-{j}")
        else:
            (s,) = pb.add_nonneg()
            pb.add_row(pb.combine((1.0, pb.entry(X, i - 1, j - 1)), (-1.0, {s: 1.0})),
                       0.0, f"nonneg {i}-{j}")
    for i in range(g.n):
        for j in range(g.n):
            pb.add_objective(pb.entry(X, i, j))
    return pb.build("max", f"theta_minus[{g.fingerprint()}]")


def build_theta_plus(g: Graph) -> ConicProgram:
    """Dual theta with ``X >= 0`` added."""
    pb = ProgramBuilder()
    B = pb.add_psd(g.n + 1)
    for i in range(1, g.n + 1):
        pb.add_row(pb.entry(B, 0, i), 1.0, f"border {i}")
    for i in range(1, g.n + 1):
        pb.add_row(pb.entry(B, i, i), 1.0, f"diag {i}")
    for i, j, adj in _pairs(g):
        if adj:
            (s,) = pb.add_nonneg()
            pb.add_row(pb.combine((1.0, pb.entry(B, i, j)), (-1.0, {s: 1.0})),
                       0.0, f"nonneg {i}-{j}")
        else:
            pb.add_row(pb.entry(B, i, j), 0.0, f"non-edge {i}-{j}")
    pb.add_objective(pb.entry(B, 0, 0))
    return pb.build("min", f"theta_plus[{g.fingerprint()}]")


def build_hat_theta(g: Graph) -> ConicProgram:
    """``min tr R`` s.t. ``R`` PSD, ``R 1 = 1``, ``R >= 0``, ``R_ij = 0`` on non-edges.

    Variable layout: ``svec(R)`` followed by one orthant slack per edge in
    ascending edge order (see :func:`hat_theta_point`).
    """
    pb = ProgramBuilder()
    R = pb.add_psd(g.n)
    for i in range(g.n):
        pb.add_row(pb.combine(*[(1.0, pb.entry(R, i, j)) for j in range(g.n)]), 1.0,
                   f"row sum {i + 1}")
    for i, j, adj in _pairs(g):
        if adj:
            (s,) = pb.add_nonneg()
            pb.add_row(pb.combine((1.0, pb.entry(R, i - 1, j - 1)), (-1.0, {s: 1.0})),
                       0.0, f"nonneg {i}-{j}")
        else:
            pb.add_row(pb.entry(R, i - 1, j - 1), 0.0, f"non-edge {i}-{j}")
    for i in range(g.n):
        pb.add_objective(pb.entry(R, i, i))
    return pb.build("min", f"theta_hat[{g.fingerprint()}]")


def hat_theta_point(g: Graph, r: np.ndarray) -> np.ndarray:
    """Variable vector of :func:`build_hat_theta` that represents matrix ``r``."""
    r = np.asarray(r, dtype=float)
    slacks = [r[i - 1, j - 1] for i, j, adj in _pairs(g) if adj]
    return np.concatenate([svec(r), np.array(slacks, dtype=float)])


BUILDERS = {
    "theta": build_theta_primal,
    "theta_dual": build_theta_dual,
    "theta_minus": build_theta_minus,
    "theta_plus": build_theta_plus,
    "theta_hat": build_hat_theta,
}


def _builder(kind: str):
    if kind == "theta_hat_prime":
        from .moments import guarded_build
        return guarded_build
    try:
        return BUILDERS[kind]
    except KeyError:
        raise ValueError(f"unknown bound kind {kind!r}; expected one of "
                         f"{sorted(set(BUILDERS) | {'theta_hat_prime'})}") from None


def solve_certified(program: ConicProgram, kind: str, g: Graph,
                    cfg: SolverConfig | None = None) -> BoundValue:
    cfg = cfg or SolverConfig()
    sol = solve_conic(program, cfg)
    if sol.status != "optimal":
        raise SolverError(f"{kind} on {g!r}: solver status {sol.status}", sol)
    res = compute_residuals(program, sol)
    # the solver's own stopping test uses the reduced rows, so re-check on the full program
    slack = 10.0
    if res.primal > slack * cfg.feas_tol or res.dual > slack * cfg.feas_tol \
            or res.gap > slack * cfg.gap_tol:
        raise SolverError(f"{kind} on {g!r}: residual certificate failed {res.as_dict()}", sol)
    return BoundValue(kind, sol.primal_obj, sol, g.fingerprint(), res, program)


def eval_bound(kind: str, g: Graph, cfg: SolverConfig | None = None) -> BoundValue:
    """Build, solve and certify one bound; raises :class:`SolverError` on failure."""
    return solve_certified(_builder(kind)(g), kind, g, cfg)


def theta(g, cfg=None) -> float:
    return eval_bound("theta", g, cfg).value


def theta_minus(g, cfg=None) -> float:
    return eval_bound("theta_minus", g, cfg).value


def theta_plus(g, cfg=None) -> float:
    return eval_bound("theta_plus", g, cfg).value


def hat_theta(g, cfg=None) -> float:
    return eval_bound("theta_hat", g, cfg).value


# -------------------------------------------------------------- closed forms

@dataclass(frozen=True)
class TwoCliqueCertificate:
    """Optimal point of the projection theta number at the complement of
    ``K_{n1} ∪ K_{n2}``: ``R = [[alpha I, beta J], [beta J, gamma I]]``."""

    n1: int
    n2: int
    alpha: Fraction
    beta: Fraction
    gamma: Fraction
    value: Fraction

    def matrix(self) -> np.ndarray:
        n1, n2 = self.n1, self.n2
        r = np.full((n1 + n2, n1 + n2), float(self.beta))
        r[:n1, :n1] = float(self.alpha) * np.eye(n1)
        r[n1:, n1:] = float(self.gamma) * np.eye(n2)
        return r

    def graph(self) -> Graph:
        return complement(clique_union(self.n1, self.n2))

    def point(self) -> np.ndarray:
        return hat_theta_point(self.graph(), self.matrix())


def two_clique_closed_form(n1: int, n2: int) -> TwoCliqueCertificate:
    if n1 < 1 or n2 < 1:
        raise ValueError("clique sizes must be positive")
    s = n1 + n2
    return TwoCliqueCertificate(n1, n2, Fraction(n1, s), Fraction(1, s), Fraction(n2, s),
                                Fraction(n1 * n1 + n2 * n2, s))


def worst_case_gap(n1: int, n2: int) -> Fraction:
    """Szegedy minus projection theta at the complement of ``K_{n1} ∪ K_{n2}``."""
    if n1 < 1 or n2 < 1:
        raise ValueError("clique sizes must be positive")
    return max(n1, n2) - two_clique_closed_form(n1, n2).value


def gap_asymptotics() -> dict:
    """Maximiser and limits of the two-clique gap.

    With ``n2 = mu * n1`` the gap is ``mu (1 - mu) / (1 + mu) * n1``; it peaks at
    ``mu = sqrt(2) - 1`` with value ``(3 - 2 sqrt 2) n1`` on ``sqrt(2) n1`` vertices.
    """
    mu = math.sqrt(2.0) - 1.0
    per_clique = 3.0 - 2.0 * math.sqrt(2.0)
    return {"mu": mu, "gap_per_largest_clique": per_clique,
            "gap_per_vertex": per_clique / math.sqrt(2.0)}


def gap_ratio(mu: float) -> float:
    return mu * (1.0 - mu) / (1.0 + mu)


# ------------------------------------------------------------------ scaling

class ScalingError(RuntimeError):
    pass


def sinkhorn_feasible_point(x, tol: float = 1e-12, max_iter: int = 10000):
    """Symmetric diagonal scaling ``r = D x D`` with unit row sums.

    Each sweep divides ``d`` by the square root of the current row sums of
    ``D x D``.  Requires ``x`` symmetric, nonnegative with unit diagonal.
    Returns ``(d, r)``.
    """
    x = np.asarray(x, dtype=float)
    if x.ndim != 2 or x.shape[0] != x.shape[1]:
        raise ValueError("x must be square")
    if not np.allclose(x, x.T, atol=1e-12):
        raise ValueError("x must be symmetric")
    if x.min() < -1e-12:
        raise ValueError("x must be entrywise nonnegative")
    if not np.allclose(np.diag(x), 1.0, atol=1e-9):
        raise ValueError("x must have unit diagonal")
    x = np.maximum(0.5 * (x + x.T), 0.0)
    d = np.ones(x.shape[0])
    for _ in range(max_iter):
        rows = d * (x @ d)
        if np.max(np.abs(rows - 1.0)) <= tol:
            break
        d = d / np.sqrt(rows)
    else:
        raise ScalingError(f"scaling did not converge in {max_iter} sweeps")
    r = d[:, None] * x * d[None, :]
    return d, r


def theta_plus_block(bound: BoundValue) -> np.ndarray:
    """The ``X`` block (without border) of a solved Szegedy program."""
    if bound.kind != "theta_plus":
        raise ValueError("expected a theta_plus bound")
    big = bound.program.cone.blocks(bound.solution.x)[0]
    return big[1:, 1:]
