"""Problem, configuration and solution containers for the conic solver."""
from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .cones import smat, svec_dim


@dataclass(frozen=True)
class ConeSpec:
    """Product of PSD cones (svec-vectorised, in order) followed by an orthant."""

    psd: tuple = ()
    nonneg: int = 0

    def __post_init__(self):
        object.__setattr__(self, "psd", tuple(int(s) for s in self.psd))
        if any(s < 1 for s in self.psd):
            raise ValueError("PSD block sizes must be positive")
        if self.nonneg < 0:
            raise ValueError("orthant length must be nonnegative")

    @property
    def dim(self) -> int:
        return sum(svec_dim(s) for s in self.psd) + self.nonneg

    @property
    def degree(self) -> int:
        """Barrier parameter (rank of the Euclidean Jordan algebra)."""
        return sum(self.psd) + self.nonneg

    def psd_slices(self) -> list[slice]:
        out, off = [], 0
        for s in self.psd:
            out.append(slice(off, off + svec_dim(s)))
            off += svec_dim(s)
        return out

    @property
    def nonneg_slice(self) -> slice:
        start = self.dim - self.nonneg
        return slice(start, self.dim)

    def identity(self) -> np.ndarray:
        e = np.zeros(self.dim)
        for s, sl in zip(self.psd, self.psd_slices()):
            e[sl] = np.eye(s)[np.triu_indices(s)]
        e[self.nonneg_slice] = 1.0
        return e

    def blocks(self, v: np.ndarray) -> list[np.ndarray]:
        """Split a cone vector into its PSD matrices."""
        return [smat(v[sl]) for sl in self.psd_slices()]


@dataclass(frozen=True)
class ConicProgram:
    """``min/max c @ x  s.t.  A @ x == b,  x in cone``.

    Row labels are kept for diagnostics only.  Arrays are frozen on construction.
    """

    cone: ConeSpec
    c: np.ndarray
    A: np.ndarray
    b: np.ndarray
    sense: str = "min"
    labels: tuple = ()
    name: str = ""

    def __post_init__(self):
        c = np.array(self.c, dtype=float).ravel()
        a = np.atleast_2d(np.array(self.A, dtype=float))
        b = np.array(self.b, dtype=float).ravel()
        if a.size == 0:
            a = a.reshape(0, self.cone.dim)
        if a.shape[1] != self.cone.dim or c.size != self.cone.dim:
            raise ValueError(f"A has {a.shape[1]} columns and c has {c.size} entries; "
                             f"cone dimension is {self.cone.dim}")
        if a.shape[0] != b.size:
            raise ValueError(f"A has {a.shape[0]} rows but b has {b.size} entries")
        if not np.all(np.isfinite(b)) or not np.all(np.isfinite(a)) or not np.all(np.isfinite(c)):
            raise ValueError("program data must be finite")
        if self.sense not in ("min", "max"):
            raise ValueError("sense must be 'min' or 'max'")
        labels = tuple(self.labels) if self.labels else tuple(f"row{i}" for i in range(b.size))
        if len(labels) != b.size:
            raise ValueError("one label per constraint row")
        for arr in (c, a, b):
            arr.setflags(write=False)
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "A", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "labels", labels)

    @property
    def shape(self) -> tuple[int, int]:
        return self.A.shape

    def to_json(self) -> str:
        """Debug dump; schema in ``docs/conic_program.schema.json``."""
        return json.dumps({
            "format": "projtheta-conic-program",
            "version": 1,
            "name": self.name,
            "sense": self.sense,
            "cone": {"psd": list(self.cone.psd), "nonneg": self.cone.nonneg},
            "vectorization": "svec-upper-rowmajor-sqrt2",
            "c": self.c.tolist(),
            "b": self.b.tolist(),
            "A": {"shape": list(self.A.shape),
                  "entries": [[int(i), int(j), float(self.A[i, j])]
                              for i, j in zip(*np.nonzero(self.A))]},
            "labels": list(self.labels),
        })

    @classmethod
    def from_json(cls, text: str) -> "ConicProgram":
        d = json.loads(text)
        cone = ConeSpec(tuple(d["cone"]["psd"]), d["cone"]["nonneg"])
        a = np.zeros(d["A"]["shape"])
        for i, j, v in d["A"]["entries"]:
            a[i, j] = v
        return cls(cone, d["c"], a, d["b"], d["sense"], tuple(d["labels"]), d.get("name", ""))


@dataclass(frozen=True)
class SolverConfig:
    gap_tol: float = 1e-8
    feas_tol: float = 1e-8
    max_iter: int = 200
    step_fraction: float = 0.98
    drop_tol: float = 1e-10

    def __post_init__(self):
        if min(self.gap_tol, self.feas_tol, self.drop_tol) <= 0:
            raise ValueError("tolerances must be strictly positive")
        if not 0 < self.step_fraction < 1:
            raise ValueError("step_fraction must lie in (0, 1)")
        if self.max_iter < 1:
            raise ValueError("max_iter must be positive")


STATUSES = ("optimal", "infeasible", "unbounded", "max_iterations", "numerical_failure")


@dataclass
class Solution:
    x: np.ndarray
    y: np.ndarray
    z: np.ndarray
    primal_obj: float
    dual_obj: float
    status: str
    iterations: int
    dropped_rows: tuple = ()
    sense: str = "min"
    info: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.status == "optimal"

    @property
    def rel_gap(self) -> float:
        return abs(self.primal_obj - self.dual_obj) / (1.0 + abs(self.primal_obj))


@dataclass(frozen=True)
class Residuals:
    primal: float
    dual: float
    gap: float
    complementarity: float
    psd_min_eig: tuple
    psd_min_eig_dual: tuple
    nonneg_min: float
    nonneg_min_dual: float

    def worst(self) -> float:
        return max(self.primal, self.dual, self.gap)

    def as_dict(self) -> dict:
        return {"primal": self.primal, "dual": self.dual, "gap": self.gap,
                "complementarity": self.complementarity,
                "psd_min_eig": list(self.psd_min_eig),
                "nonneg_min": self.nonneg_min}


def compute_residuals(p: ConicProgram, s: Solution) -> Residuals:
    """Feasibility, gap and cone-membership report for ``s`` against the full program.

    Dual feasibility is ``A^T y + z = c`` for minimisation and
    ``A^T y - z = c`` for maximisation (``z`` always lies in the cone).
    """
    if s.x.size != p.cone.dim or s.y.size != p.A.shape[0]:
        raise ValueError("solution dimensions do not match the program")
    sign = 1.0 if p.sense == "min" else -1.0
    pres = np.linalg.norm(p.A @ s.x - p.b) / (1.0 + np.linalg.norm(p.b))
    dres = np.linalg.norm(p.A.T @ s.y + sign * s.z - p.c) / (1.0 + np.linalg.norm(p.c))
    pobj = float(p.c @ s.x)
    dobj = float(p.b @ s.y)
    gap = abs(pobj - dobj) / (1.0 + abs(pobj))
    comp = abs(float(s.x @ s.z)) / (1.0 + abs(pobj))
    eig = tuple(float(np.linalg.eigvalsh(m)[0]) for m in p.cone.blocks(s.x))
    eigd = tuple(float(np.linalg.eigvalsh(m)[0]) for m in p.cone.blocks(s.z))
    nn = s.x[p.cone.nonneg_slice]
    nz = s.z[p.cone.nonneg_slice]
    return Residuals(float(pres), float(dres), float(gap), float(comp), eig, eigd,
                     float(nn.min()) if nn.size else float("inf"),
                     float(nz.min()) if nz.size else float("inf"))
