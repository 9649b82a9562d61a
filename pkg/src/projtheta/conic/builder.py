"""Incremental assembly of a :class:`ConicProgram` from named variables."""
from __future__ import annotations

import numpy as np

from .cones import svec_coefficient, svec_dim, svec_offset
from .program import ConeSpec, ConicProgram


class ProgramBuilder:
    """Collects PSD blocks, orthant variables and sparse equality rows.

    Variable references are ``("psd", block, svec_index)`` or ``("nn", index)``
    and are resolved to columns only in :meth:`build`, so blocks and orthant
    variables may be added in any order.
    """

    def __init__(self):
        self.psd_sizes: list[int] = []
        self.n_nonneg = 0
        self.rows: list[dict] = []
        self.rhs: list[float] = []
        self.labels: list[str] = []
        self.obj: dict = {}

    def add_psd(self, size: int) -> int:
        self.psd_sizes.append(int(size))
        return len(self.psd_sizes) - 1

    def add_nonneg(self, count: int = 1) -> list[tuple]:
        start = self.n_nonneg
        self.n_nonneg += count
        return [("nn", k) for k in range(start, start + count)]

    def entry(self, block: int, i: int, j: int) -> dict:
        """Linear form (as ``{ref: coef}``) that reads ``X_block[i, j]`` (0-based)."""
        s = self.psd_sizes[block]
        return {("psd", block, svec_offset(s, i, j)): svec_coefficient(s, i, j)}

    @staticmethod
    def combine(*terms) -> dict:
        """Sum ``(coef, form)`` pairs into one linear form."""
        out: dict = {}
        for coef, form in terms:
            for ref, v in form.items():
                out[ref] = out.get(ref, 0.0) + coef * v
        return out

    def add_row(self, form: dict, rhs: float, label: str):
        self.rows.append(form)
        self.rhs.append(float(rhs))
        self.labels.append(label)

    def add_objective(self, form: dict, coef: float = 1.0):
        for ref, v in form.items():
            self.obj[ref] = self.obj.get(ref, 0.0) + coef * v

    def _columns(self):
        offsets, off = [], 0
        for s in self.psd_sizes:
            offsets.append(off)
            off += svec_dim(s)
        return offsets, off

    def column(self, ref) -> int:
        offsets, nn_start = self._columns()
        if ref[0] == "psd":
            return offsets[ref[1]] + ref[2]
        return nn_start + ref[1]

    def build(self, sense: str = "min", name: str = "") -> ConicProgram:
        offsets, nn_start = self._columns()
        cone = ConeSpec(tuple(self.psd_sizes), self.n_nonneg)

        def col(ref):
            return offsets[ref[1]] + ref[2] if ref[0] == "psd" else nn_start + ref[1]

        a = np.zeros((len(self.rows), cone.dim))
        for r, form in enumerate(self.rows):
            for ref, v in form.items():
                a[r, col(ref)] += v
        c = np.zeros(cone.dim)
        for ref, v in self.obj.items():
            c[col(ref)] += v
        return ConicProgram(cone, c, a, np.array(self.rhs), sense, tuple(self.labels), name)
