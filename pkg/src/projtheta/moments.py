"""First-stage moment strengthening of the projection relaxation.

The variable is a fully symmetric third-order tensor ``T`` whose slices
``S_i = (T_ijl)_jl`` play the role of the diagonal moment blocks ``R_ii``.
Each slice is PSD and entrywise nonnegative with ``<S_i, J> = 1``, and
``S_i e_i = diag(S_i)``.  Under full symmetry the last condition says that
the entries with multisets ``{i,i,j}`` and ``{i,j,j}`` coincide, so the two
are stored as one scalar.  The bound is ``min sum_i tr(S_i)``; the slice sum
``R = sum_i S_i`` is then feasible for the plain projection relaxation.

Zero pattern.  Requiring ``<R_ii, A> = 0`` for the non-edge adjacency ``A``
together with ``S_i >= 0`` forces ``T_ijl = 0`` whenever ``{j,l}`` is a
non-edge; by symmetry of ``T`` the same holds for ``{i,j}`` and ``{i,l}``.
The default build therefore removes those entries from the variable list
instead of adding the aggregated row.  ``eliminate=False`` keeps every entry
and adds the rows, which gives the same optimum and serves as a check.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations_with_replacement
from math import comb

import numpy as np

from .conic import ConicProgram, SolverConfig, smat, svec
from .conic.builder import ProgramBuilder
from .exact import GuardExceeded
from .graph import Graph

PRIME_GUARD = 30


def tensor_size(n: int) -> int:
    """Number of multisets ``{i,j,l}`` over ``n`` symbols."""
    return comb(n + 2, 3)


def canonical_index(i: int, j: int, l: int, n: int) -> int:
    """Dense offset of the multiset ``{i,j,l}`` (1-based vertices).

    Offsets follow the lexicographic order of sorted triples, so the map is
    invariant under permutation of the arguments.
    """
    for v in (i, j, l):
        if not 1 <= v <= n:
            raise ValueError(f"index {v} outside 1..{n}")
    a, b, c = sorted((i - 1, j - 1, l - 1))
    # triples starting below a, then pairs (b, c) with a <= b <= c starting below b
    before_a = tensor_size(n) - tensor_size(n - a)
    m = n - a
    before_b = comb(m + 1, 2) - comb(m - (b - a) + 1, 2)
    return before_a + before_b + (c - b)


@lru_cache(maxsize=None)
def _multisets(n: int) -> tuple:
    return tuple(combinations_with_replacement(range(1, n + 1), 3))


@dataclass
class SymTensor3:
    """Symmetric third-order tensor stored once per multiset."""

    n: int
    values: np.ndarray = field(default=None)

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be positive")
        if self.values is None:
            self.values = np.zeros(tensor_size(self.n))
        self.values = np.asarray(self.values, dtype=float)
        if self.values.shape != (tensor_size(self.n),):
            raise ValueError(f"expected {tensor_size(self.n)} stored values")

    def __getitem__(self, key) -> float:
        return float(self.values[canonical_index(*key, self.n)])

    def __setitem__(self, key, value):
        self.values[canonical_index(*key, self.n)] = value

    def slice(self, i: int) -> np.ndarray:
        """``(T_ijl)_{jl}`` as an ``n x n`` array (``i`` is 1-based)."""
        n = self.n
        out = np.empty((n, n))
        for j in range(1, n + 1):
            for l in range(j, n + 1):
                out[j - 1, l - 1] = out[l - 1, j - 1] = self[i, j, l]
        return out

    def slices(self) -> list[np.ndarray]:
        return [self.slice(i) for i in range(1, self.n + 1)]

    @classmethod
    def from_function(cls, n: int, f) -> "SymTensor3":
        t = cls(n)
        for i, j, l in _multisets(n):
            t.values[canonical_index(i, j, l, n)] = f(i, j, l)
        return t

    @classmethod
    def from_colouring(cls, parts, n: int) -> "SymTensor3":
        """Moment tensor of an exact colouring: ``T_ijl = 1/|T_c|^2`` when ``i,j,l`` share class ``T_c``."""
        colour = {}
        for c, part in enumerate(parts):
            for v in part:
                colour[v] = c
        size = {c: sum(1 for v in colour if colour[v] == c) for c in set(colour.values())}

        def f(i, j, l):
            c = colour[i]
            return 1.0 / size[c] ** 2 if colour[j] == c and colour[l] == c else 0.0

        return cls.from_function(n, f)

    def merged(self) -> bool:
        """True if ``T_iij == T_ijj`` for all pairs (the ``S_i e_i = diag(S_i)`` condition)."""
        return all(abs(self[i, i, j] - self[i, j, j]) <= 1e-12
                   for i in range(1, self.n + 1) for j in range(i + 1, self.n + 1))


def _class_key(i: int, j: int, l: int):
    """Storage class of a multiset after identifying ``{i,i,j}`` with ``{i,j,j}``."""
    a, b, c = sorted((i, j, l))
    if a == b or b == c:
        distinct = sorted({a, b, c})
        return tuple(distinct)
    return (a, b, c)


def _vanishes(g: Graph, key) -> bool:
    return any(not g.has_edge(u, v) for idx, u in enumerate(key) for v in key[idx + 1:])


def storage_classes(g: Graph, eliminate: bool = True) -> list[tuple]:
    """Tensor storage classes that remain variables, in a fixed order."""
    keys = sorted({_class_key(*t) for t in _multisets(g.n)}, key=lambda k: (len(k), k))
    if eliminate:
        keys = [k for k in keys if not _vanishes(g, k)]
    return keys


def build_hat_theta_prime(g: Graph, eliminate: bool = True) -> ConicProgram:
    """Conic program for the moment strengthening evaluated at ``g``.

    Layout: ``n`` PSD blocks (the slices, in vertex order) followed by one
    orthant variable per stored tensor class (see :func:`storage_classes`).
    Rows, in order: slice-to-storage ties, slice normalisations, the implied
    row sums of ``R`` (left for presolve to drop), and with
    ``eliminate=False`` one non-edge row per slice.
    """
    n = g.n
    pb = ProgramBuilder()
    blocks = [pb.add_psd(n) for _ in range(n)]
    classes = storage_classes(g, eliminate)
    refs = dict(zip(classes, pb.add_nonneg(len(classes))))

    def storage(i, j, l):
        ref = refs.get(_class_key(i, j, l))
        return {} if ref is None else {ref: 1.0}

    for i in range(1, n + 1):
        blk = blocks[i - 1]
        for j in range(1, n + 1):
            for l in range(j, n + 1):
                form = pb.combine((1.0, pb.entry(blk, j - 1, l - 1)), (-1.0, storage(i, j, l)))
                pb.add_row(form, 0.0, f"slice {i} entry {j}-{l}")
    for i in range(1, n + 1):
        blk = blocks[i - 1]
        form = pb.combine(*[(1.0, pb.entry(blk, j, l)) for j in range(n) for l in range(n)])
        pb.add_row(form, 1.0, f"slice {i} normalisation")
    for j in range(1, n + 1):
        form = pb.combine(*[(1.0, storage(i, j, l)) for i in range(1, n + 1)
                            for l in range(1, n + 1)])
        pb.add_row(form, 1.0, f"row sum {j}")
    if not eliminate:
        for i in range(1, n + 1):
            blk = blocks[i - 1]
            form = pb.combine(*[(2.0, pb.entry(blk, u - 1, v - 1)) for u, v in g.non_edges()])
            if form:
                pb.add_row(form, 0.0, f"slice {i} non-edges")
    for i in range(n):
        for j in range(n):
            pb.add_objective(pb.entry(blocks[i], j, j))
    tag = "" if eliminate else ",full"
    return pb.build("min", f"theta_hat_prime[{g.fingerprint()}{tag}]")


def tensor_from_solution(g: Graph, x: np.ndarray) -> SymTensor3:
    """Read the storage part of a solution vector back into a tensor."""
    n = g.n
    nn = x[n * n * (n + 1) // 2:]
    classes = storage_classes(g, True)
    if nn.size != len(classes):
        classes = storage_classes(g, False)
    value = dict(zip(classes, nn))
    return SymTensor3.from_function(n, lambda i, j, l: value.get(_class_key(i, j, l), 0.0))


def slices_from_solution(g: Graph, x: np.ndarray) -> list[np.ndarray]:
    """The ``n`` PSD slice blocks of a solution vector."""
    s = g.n * (g.n + 1) // 2
    return [smat(x[k * s:(k + 1) * s]) for k in range(g.n)]


def recover_r(slices) -> np.ndarray:
    """``R = sum_i S_i``."""
    return np.sum(slices, axis=0)


def recovery_defect(slices) -> float:
    """Largest violation of ``R e_i = S_i 1`` over all ``i``."""
    r = recover_r(slices)
    return max(float(np.max(np.abs(r[:, i] - s.sum(axis=1)))) for i, s in enumerate(slices))


def colouring_point(g: Graph, parts) -> np.ndarray:
    """Feasible vector for :func:`build_hat_theta_prime` built from a colouring of the complement.

    ``parts`` must be cliques of ``g`` (stable sets of its complement).
    """
    t = SymTensor3.from_colouring(parts, g.n)
    x = np.concatenate([_svec_slices(t), [t[k if len(k) == 3 else (k[0], k[0], k[-1])]
                                          for k in storage_classes(g, True)]])
    return x


def _svec_slices(t: SymTensor3) -> np.ndarray:
    return np.concatenate([svec(s) for s in t.slices()])


def guarded_build(g: Graph) -> ConicProgram:
    """:func:`build_hat_theta_prime` behind the size guard (``n`` PSD blocks of size ``n``)."""
    if g.n > PRIME_GUARD:
        raise GuardExceeded(f"moment model limited to n <= {PRIME_GUARD} (got {g.n})")
    return build_hat_theta_prime(g)


def hat_theta_prime(g: Graph, cfg: SolverConfig | None = None):
    """Evaluate the moment-strengthened bound; returns a ``BoundValue``."""
    from .theta import solve_certified
    return solve_certified(guarded_build(g), "theta_hat_prime", g, cfg)
