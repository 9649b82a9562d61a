"""Exact combinatorial oracles.

Stable sets, clique and chromatic numbers by enumeration or branch and bound,
together with the correspondence between colourings, assignment matrices
``U`` and their projection matrices ``U (U^T U)^{-1} U^T``.  Everything that
touches projection matrices works in exact rational arithmetic.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

import numpy as np

from .graph import Graph, complement, empty

STABLE_SET_GUARD = 20
CHI_GUARD = 12
PARTITION_GUARD = 8
TRANSITIVITY_GUARD = 9


class GuardExceeded(ValueError):
    """Instance too large for an enumeration-based routine."""


def _guard(g: Graph, limit: int, what: str):
    if g.n > limit:
        raise GuardExceeded(f"{what}: n={g.n} exceeds enumeration guard {limit}")


# ----------------------------------------------------------------- types

class RationalMatrix:
    """Dense matrix of :class:`fractions.Fraction` entries (always reduced)."""

    __slots__ = ("rows", "cols", "_data")

    def __init__(self, data: Iterable[Iterable]):
        rows = tuple(tuple(Fraction(x) for x in row) for row in data)
        if not rows or not rows[0]:
            raise ValueError("RationalMatrix needs at least one entry")
        if any(len(r) != len(rows[0]) for r in rows):
            raise ValueError("ragged rows")
        self._data = rows
        self.rows = len(rows)
        self.cols = len(rows[0])

    @classmethod
    def identity(cls, n: int) -> "RationalMatrix":
        return cls([[int(i == j) for j in range(n)] for i in range(n)])

    @classmethod
    def full(cls, n: int, value) -> "RationalMatrix":
        return cls([[value] * n for _ in range(n)])

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def __getitem__(self, ij):
        i, j = ij
        return self._data[i][j]

    def row(self, i: int) -> tuple:
        return self._data[i]

    def column(self, j: int) -> tuple:
        return tuple(r[j] for r in self._data)

    @property
    def T(self) -> "RationalMatrix":
        return RationalMatrix(zip(*self._data))

    def __matmul__(self, other: "RationalMatrix") -> "RationalMatrix":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        oc = other.T._data
        return RationalMatrix([[sum((a * b for a, b in zip(r, c)), Fraction(0))
                                for c in oc] for r in self._data])

    def __mul__(self, scalar) -> "RationalMatrix":
        s = Fraction(scalar)
        return RationalMatrix([[s * x for x in r] for r in self._data])

    __rmul__ = __mul__

    def trace(self) -> Fraction:
        return sum((self._data[i][i] for i in range(min(self.shape))), Fraction(0))

    def is_symmetric(self) -> bool:
        return self.rows == self.cols and self._data == self.T._data

    def to_numpy(self) -> np.ndarray:
        return np.array([[float(x) for x in r] for r in self._data])

    def __eq__(self, other):
        return isinstance(other, RationalMatrix) and self._data == other._data

    def __hash__(self):
        return hash(self._data)

    def __repr__(self):
        body = "; ".join(" ".join(str(x) for x in r) for r in self._data)
        return f"RationalMatrix([{body}])"


@dataclass(frozen=True)
class Partition:
    """Set partition of ``1..n``; parts ordered by their smallest vertex."""

    parts: tuple

    def __post_init__(self):
        parts = [frozenset(p) for p in self.parts]
        if any(not p for p in parts):
            raise ValueError("partition has an empty part")
        union = set().union(*parts) if parts else set()
        if sum(len(p) for p in parts) != len(union):
            raise ValueError("partition parts overlap")
        if union != set(range(1, len(union) + 1)):
            raise ValueError("partition does not cover 1..n")
        object.__setattr__(self, "parts", tuple(sorted(parts, key=min)))

    @property
    def n(self) -> int:
        return sum(len(p) for p in self.parts)

    @property
    def k(self) -> int:
        return len(self.parts)

    def is_colouring(self, g: Graph) -> bool:
        return self.n == g.n and all(is_stable(g, p) for p in self.parts)

    def as_lists(self) -> list[list[int]]:
        return [sorted(p) for p in self.parts]

    def assignment(self) -> "AssignmentMatrix":
        u = np.zeros((self.n, self.k), dtype=int)
        for c, part in enumerate(self.parts):
            for v in part:
                u[v - 1, c] = 1
        return AssignmentMatrix(u)


class AssignmentMatrix:
    """Binary ``n x k`` matrix with unit row sums and no zero column."""

    def __init__(self, matrix):
        u = np.array(matrix, dtype=int)
        if u.ndim != 2:
            raise ValueError("assignment matrix must be 2-D")
        if not np.isin(u, (0, 1)).all():
            raise ValueError("assignment matrix must be binary")
        if not (u.sum(axis=1) == 1).all():
            raise ValueError("every row of an assignment matrix sums to 1")
        if (u.sum(axis=0) == 0).any():
            raise ValueError("assignment matrix has a zero column")
        u.setflags(write=False)
        self.matrix = u

    @property
    def shape(self):
        return self.matrix.shape

    def column_supports(self) -> list[frozenset]:
        return [frozenset(int(i) + 1 for i in np.flatnonzero(col)) for col in self.matrix.T]

    def partition(self) -> Partition:
        return Partition(tuple(self.column_supports()))

    def __eq__(self, other):
        return isinstance(other, AssignmentMatrix) and np.array_equal(self.matrix, other.matrix)

    def __hash__(self):
        return hash(self.matrix.tobytes() + bytes(self.matrix.shape))

    def __repr__(self):
        return f"AssignmentMatrix({self.matrix.tolist()})"


# ----------------------------------------------------------- stable sets

def is_stable(g: Graph, vertices: Iterable[int]) -> bool:
    vs = sorted(vertices)
    return not any(g.has_edge(a, b) for a, b in itertools.combinations(vs, 2))


def _neighbour_masks(g: Graph) -> list[int]:
    masks = [0] * g.n
    for i, j in g.edges:
        masks[i - 1] |= 1 << (j - 1)
        masks[j - 1] |= 1 << (i - 1)
    return masks


def enumerate_stable_sets(g: Graph, guard: int = STABLE_SET_GUARD) -> list[frozenset]:
    """All stable sets including the empty set, ordered by size then lexicographically."""
    _guard(g, guard, "enumerate_stable_sets")
    nbr = _neighbour_masks(g)
    found: list[tuple[int, ...]] = []

    def extend(current: tuple, start: int, blocked: int):
        found.append(current)
        for v in range(start, g.n):
            if not blocked >> v & 1:
                extend(current + (v + 1,), v + 1, blocked | nbr[v])

    extend((), 0, 0)
    found.sort(key=lambda s: (len(s), s))
    return [frozenset(s) for s in found]


def alpha_exact(g: Graph, guard: int = STABLE_SET_GUARD) -> tuple[int, frozenset]:
    """Stability number and one maximum stable set (branch and bound on bitmasks)."""
    _guard(g, guard, "alpha_exact")
    nbr = _neighbour_masks(g)
    best = [0, 0]

    def search(chosen: int, size: int, candidates: int):
        if candidates == 0:
            if size > best[0]:
                best[:] = [size, chosen]
            return
        if size + bin(candidates).count("1") <= best[0]:
            return
        v = (candidates & -candidates).bit_length() - 1
        # branch: take v, then skip v
        search(chosen | 1 << v, size + 1, candidates & ~nbr[v] & ~(1 << v))
        search(chosen, size, candidates & ~(1 << v))

    search(0, 0, (1 << g.n) - 1)
    witness = frozenset(v + 1 for v in range(g.n) if best[1] >> v & 1)
    return best[0], witness


def omega_exact(g: Graph, guard: int = STABLE_SET_GUARD) -> tuple[int, frozenset]:
    return alpha_exact(complement(g), guard)


def _greedy_colouring(g: Graph, order: Sequence[int], nbr: list[int]) -> list[int]:
    colour = [-1] * g.n
    for v in order:
        used = {colour[u] for u in range(g.n) if nbr[v] >> u & 1}
        c = 0
        while c in used:
            c += 1
        colour[v] = c
    return colour


def chi_exact(g: Graph, guard: int = CHI_GUARD) -> tuple[int, Partition]:
    """Chromatic number and a witness colouring.

    Backtracking over vertices in descending-degree order, bounded by a greedy
    colouring; a new colour class is opened only if it can still beat the
    incumbent.
    """
    _guard(g, guard, "chi_exact")
    nbr = _neighbour_masks(g)
    deg = g.degrees()
    order = sorted(range(g.n), key=lambda v: (-deg[v], v))
    best_colour = _greedy_colouring(g, order, nbr)
    best = [max(best_colour) + 1]
    clique_lb = omega_exact(g, guard=max(guard, STABLE_SET_GUARD))[0]
    colour = [-1] * g.n

    def search(pos: int, used: int):
        if used >= best[0]:
            return
        if pos == g.n:
            best[0] = used
            best_colour[:] = colour
            return
        v = order[pos]
        blocked = {colour[u] for u in range(g.n) if nbr[v] >> u & 1 and colour[u] >= 0}
        for c in range(used):
            if c not in blocked:
                colour[v] = c
                search(pos + 1, used)
                if best[0] == clique_lb:
                    break
        if best[0] > clique_lb and used + 1 < best[0]:
            colour[v] = used
            search(pos + 1, used + 1)
        colour[v] = -1

    if best[0] > clique_lb:
        search(0, 0)
    classes: dict[int, set] = {}
    for v, c in enumerate(best_colour):
        classes.setdefault(c, set()).add(v + 1)
    return best[0], Partition(tuple(classes.values()))


# ------------------------------------------------------ projection model

def rho(u: AssignmentMatrix | np.ndarray) -> RationalMatrix:
    """Projection matrix of an assignment matrix.

    ``U^T U`` is the diagonal of part sizes, so entry ``(i, j)`` is
    ``1/|T_c|`` when rows ``i`` and ``j`` both sit in column ``c`` and 0 otherwise.
    """
    if not isinstance(u, AssignmentMatrix):
        u = AssignmentMatrix(u)
    mat = u.matrix
    sizes = mat.sum(axis=0)
    col_of = mat.argmax(axis=1)
    n = mat.shape[0]
    return RationalMatrix([[Fraction(1, int(sizes[col_of[i]])) if col_of[i] == col_of[j] else 0
                            for j in range(n)] for i in range(n)])


def _inverse(m: RationalMatrix) -> RationalMatrix:
    n = m.rows
    aug = [list(m.row(i)) + [Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    for c in range(n):
        piv = next((r for r in range(c, n) if aug[r][c] != 0), None)
        if piv is None:
            raise ValueError("matrix is singular")
        aug[c], aug[piv] = aug[piv], aug[c]
        p = aug[c][c]
        aug[c] = [x / p for x in aug[c]]
        for r in range(n):
            if r != c and aug[r][c] != 0:
                f = aug[r][c]
                aug[r] = [a - f * b for a, b in zip(aug[r], aug[c])]
    return RationalMatrix(row[n:] for row in aug)


def rho_general(x) -> RationalMatrix:
    """``X (X^T X)^{-1} X^T`` for any full-column-rank matrix, by Gauss-Jordan.

    Slow reference route, used to cross-check :func:`rho`.
    """
    xs = x if isinstance(x, RationalMatrix) else RationalMatrix(np.asarray(x).tolist())
    return xs @ _inverse(xs.T @ xs) @ xs.T


def is_combinatorial_projection(r: RationalMatrix, g: Graph) -> tuple[bool, str]:
    """Check membership of ``r`` in the combinatorial projection matrices of ``g``.

    Returns ``(ok, diagnostic)`` where the diagnostic names the first failed
    condition, or ``"ok"``.
    """
    if r.shape != (g.n, g.n):
        raise ValueError(f"matrix shape {r.shape} does not match graph on {g.n} vertices")
    n = g.n
    if not r.is_symmetric():
        return False, "not symmetric"
    for j in range(n):
        col = r.column(j)
        if any(x < 0 for x in col):
            return False, f"column {j + 1} has a negative entry"
        if sum(col) != 1:
            return False, f"column {j + 1} does not sum to 1 (not in the simplex)"
        support = [i + 1 for i, x in enumerate(col) if x != 0]
        if not is_stable(g, support):
            return False, f"support of column {j + 1} is not a stable set"
    for i in range(n):
        ri = r.column(i)
        for j in range(n):
            rij = r[i, j]
            if rij != 0 and ri != r.column(j):
                return False, f"block-inducing equation fails for columns {i + 1},{j + 1}"
    if r.trace().denominator != 1:
        return False, "trace is not an integer"
    return True, "ok"


def psi(r: RationalMatrix, g: Graph | None = None) -> Partition:
    """Colouring encoded by a combinatorial projection matrix (distinct column supports)."""
    g = g if g is not None else empty(r.rows)
    ok, why = is_combinatorial_projection(r, g)
    if not ok:
        raise ValueError(f"not a combinatorial projection matrix: {why}")
    supports = {frozenset(i + 1 for i, x in enumerate(r.column(j)) if x != 0)
                for j in range(r.cols)}
    return Partition(tuple(supports))


def enumerate_colourings(g: Graph, guard: int = PARTITION_GUARD) -> Iterator[Partition]:
    """Every partition of the vertex set into stable sets (unordered parts)."""
    _guard(g, guard, "enumerate_colourings")
    nbr = _neighbour_masks(g)
    blocks: list[int] = []

    def place(v: int):
        if v == g.n:
            yield Partition(tuple(frozenset(u + 1 for u in range(g.n) if b >> u & 1)
                                  for b in blocks))
            return
        for idx, b in enumerate(blocks):
            if not b & nbr[v]:
                blocks[idx] = b | 1 << v
                yield from place(v + 1)
                blocks[idx] = b
        blocks.append(1 << v)
        yield from place(v + 1)
        blocks.pop()

    yield from place(0)


def enumerate_assignment_matrices(g: Graph, k: int,
                                  guard: int = PARTITION_GUARD) -> list[AssignmentMatrix]:
    """All assignment matrices with ``k`` columns whose column supports are stable."""
    _guard(g, guard, "enumerate_assignment_matrices")
    if not 1 <= k <= g.n:
        raise ValueError(f"k={k} outside 1..{g.n}")
    out = []
    for part in enumerate_colourings(g, guard):
        if part.k != k:
            continue
        for perm in itertools.permutations(part.parts):
            u = np.zeros((g.n, k), dtype=int)
            for c, block in enumerate(perm):
                u[[v - 1 for v in block], c] = 1
            out.append(AssignmentMatrix(u))
    out.sort(key=lambda a: tuple(a.matrix.ravel().tolist()), reverse=True)
    return out


def chi_via_projection(g: Graph, guard: int = PARTITION_GUARD) -> tuple[int, Partition]:
    """Minimum trace over all combinatorial projection matrices of ``g``."""
    _guard(g, guard, "chi_via_projection")
    best = None
    for part in enumerate_colourings(g, guard):
        r = rho(part.assignment())
        ok, why = is_combinatorial_projection(r, g)
        if not ok:
            raise AssertionError(f"rho of a colouring failed validation: {why}")
        tr = r.trace()
        if best is None or tr < best[0]:
            best = (tr, part)
    return int(best[0]), best[1]


def combinatorial_projections_brute(g: Graph, k: int | None = None) -> set[RationalMatrix]:
    """Every matrix accepted by :func:`is_combinatorial_projection`, found without ``rho``.

    Each column of such a matrix is ``1_S/|S|`` for a nonempty stable ``S``
    containing its own index.  Columns are chosen one at a time and a choice
    is dropped as soon as it breaks symmetry with an earlier column; complete
    candidates are then validated in full.  Exponential; only for small ``n``.
    """
    _guard(g, 6, "combinatorial_projections_brute")
    n = g.n
    stable = [s for s in enumerate_stable_sets(g) if s]
    choices = [[s for s in stable if j + 1 in s] for j in range(n)]
    found = set()

    def entry(s, i):
        return Fraction(1, len(s)) if i + 1 in s else Fraction(0)

    def extend(chosen: list):
        j = len(chosen)
        if j == n:
            r = RationalMatrix(zip(*[[entry(s, i) for i in range(n)] for s in chosen]))
            if (k is None or r.trace() == k) and is_combinatorial_projection(r, g)[0]:
                found.add(r)
            return
        for s in choices[j]:
            if all(entry(s, i) == entry(chosen[i], j) for i in range(j)):
                chosen.append(s)
                extend(chosen)
                chosen.pop()

    extend([])
    return found


# ------------------------------------------------------ vertex transitivity

def is_vertex_transitive_small(g: Graph, guard: int = TRANSITIVITY_GUARD) -> bool:
    """Whether the automorphism group is transitive, by backtracking search."""
    _guard(g, guard, "is_vertex_transitive_small")
    n = g.n
    adj = g.adjacency().astype(bool)
    deg = adj.sum(axis=1)
    if len(set(deg.tolist())) > 1:
        return False

    def extend(mapping: list[int], used: set) -> bool:
        v = len(mapping)
        if v == n:
            return True
        for w in range(n):
            if w in used or deg[w] != deg[v]:
                continue
            if all(adj[v, u] == adj[w, mapping[u]] for u in range(v)):
                mapping.append(w)
                used.add(w)
                if extend(mapping, used):
                    return True
                mapping.pop()
                used.discard(w)
        return False

    for target in range(1, n):
        if not extend([target], {target}):
            return False
    return True
