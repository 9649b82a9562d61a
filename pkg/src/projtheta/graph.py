"""Simple undirected graphs, the generator families used throughout, and
DIMACS ``.col`` I/O.

Vertices are 1-based in every public function (DIMACS convention).
"""
from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np


class DimacsError(ValueError):
    """Malformed DIMACS input."""


def _pair(i: int, j: int) -> tuple[int, int]:
    return (i, j) if i < j else (j, i)


@dataclass(frozen=True)
class Graph:
    """Immutable simple graph on vertices ``1..n``.

    ``edges`` holds unordered pairs normalised to ``(i, j)`` with ``i < j``.
    ``vertex_transitive`` is only ever set by the generators that know it.
    """

    n: int
    edges: frozenset = field(default_factory=frozenset)
    vertex_transitive: bool = field(default=False, compare=False)
    name: str = field(default="", compare=False)

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"graph needs at least one vertex, got n={self.n}")
        normed = set()
        for e in self.edges:
            i, j = (int(v) for v in e)
            if i == j:
                raise ValueError(f"self-loop at vertex {i}")
            if not (1 <= i <= self.n and 1 <= j <= self.n):
                raise ValueError(f"edge {{{i},{j}}} outside 1..{self.n}")
            normed.add(_pair(i, j))
        object.__setattr__(self, "edges", frozenset(normed))

    @classmethod
    def from_edges(cls, n: int, edges: Iterable, **kw) -> "Graph":
        return cls(n, frozenset(tuple(e) for e in edges), **kw)

    @classmethod
    def from_adjacency(cls, adj) -> "Graph":
        adj = np.asarray(adj)
        n = adj.shape[0]
        if adj.shape != (n, n) or not np.array_equal(adj, adj.T):
            raise ValueError("adjacency matrix must be square and symmetric")
        if np.any(np.diag(adj) != 0):
            raise ValueError("adjacency matrix has a nonzero diagonal")
        iu, ju = np.nonzero(np.triu(adj, 1))
        return cls(n, frozenset((int(i) + 1, int(j) + 1) for i, j in zip(iu, ju)))

    @property
    def m(self) -> int:
        return len(self.edges)

    def has_edge(self, i: int, j: int) -> bool:
        return i != j and _pair(i, j) in self.edges

    def adjacency(self) -> np.ndarray:
        """0/1 adjacency matrix (0-based rows/columns)."""
        a = np.zeros((self.n, self.n), dtype=int)
        for i, j in self.edges:
            a[i - 1, j - 1] = a[j - 1, i - 1] = 1
        return a

    def neighbours(self, v: int) -> set[int]:
        return {j if i == v else i for i, j in self.edges if v in (i, j)}

    def degrees(self) -> list[int]:
        deg = [0] * self.n
        for i, j in self.edges:
            deg[i - 1] += 1
            deg[j - 1] += 1
        return deg

    def non_edges(self) -> list[tuple[int, int]]:
        """Distinct vertex pairs that are not edges, ascending."""
        return [p for p in itertools.combinations(range(1, self.n + 1), 2)
                if p not in self.edges]

    def components(self) -> list[list[int]]:
        seen, comps = set(), []
        adj = {v: set() for v in range(1, self.n + 1)}
        for i, j in self.edges:
            adj[i].add(j)
            adj[j].add(i)
        for v in range(1, self.n + 1):
            if v in seen:
                continue
            stack, comp = [v], []
            seen.add(v)
            while stack:
                u = stack.pop()
                comp.append(u)
                for w in adj[u] - seen:
                    seen.add(w)
                    stack.append(w)
            comps.append(sorted(comp))
        return comps

    def fingerprint(self) -> str:
        edges = ",".join(f"{i}-{j}" for i, j in sorted(self.edges))
        return f"n={self.n};m={self.m};{edges}"

    def __repr__(self):
        label = f" {self.name}" if self.name else ""
        return f"Graph(n={self.n}, m={self.m}{label})"


# ---------------------------------------------------------------- operators

def complement(g: Graph) -> Graph:
    return Graph(g.n, frozenset(g.non_edges()),
                 vertex_transitive=g.vertex_transitive,
                 name=f"co({g.name})" if g.name else "")


def disjoint_union(g: Graph, h: Graph) -> Graph:
    shifted = {(i + g.n, j + g.n) for i, j in h.edges}
    return Graph(g.n + h.n, frozenset(g.edges | shifted))


def induced_subgraph(g: Graph, keep: Iterable[int]) -> Graph:
    """Subgraph induced by ``keep``, relabelled 1..|keep| in ascending order."""
    keep = sorted(set(keep))
    if not keep:
        raise ValueError("induced subgraph needs at least one vertex")
    bad = [v for v in keep if not 1 <= v <= g.n]
    if bad:
        raise ValueError(f"vertices {bad} outside 1..{g.n}")
    relabel = {v: k + 1 for k, v in enumerate(keep)}
    edges = {(relabel[i], relabel[j]) for i, j in g.edges
             if i in relabel and j in relabel}
    return Graph(len(keep), frozenset(edges))


# --------------------------------------------------------------- generators

def _check_size(n, what="n"):
    if int(n) != n or n < 1:
        raise ValueError(f"{what} must be a positive integer, got {n!r}")
    return int(n)


def complete(n: int) -> Graph:
    n = _check_size(n)
    return Graph(n, frozenset(itertools.combinations(range(1, n + 1), 2)),
                 vertex_transitive=True, name=f"K_{n}")


def empty(n: int) -> Graph:
    n = _check_size(n)
    return Graph(n, frozenset(), vertex_transitive=True, name=f"empty_{n}")


def path(n: int) -> Graph:
    n = _check_size(n)
    return Graph(n, frozenset((i, i + 1) for i in range(1, n)), name=f"P_{n}")


def circulant(n: int, offsets: Iterable[int]) -> Graph:
    n = _check_size(n)
    offsets = sorted(set(int(s) for s in offsets))
    for s in offsets:
        if not 1 <= s <= n // 2:
            raise ValueError(f"circulant offset {s} outside 1..{n // 2}")
    edges = set()
    for v in range(n):
        for s in offsets:
            edges.add(_pair(v + 1, (v + s) % n + 1))
    return Graph(n, frozenset(edges), vertex_transitive=True,
                 name=f"C_{n}({','.join(map(str, offsets))})")


def cycle(n: int) -> Graph:
    n = _check_size(n)
    if n < 3:
        raise ValueError("a cycle needs at least 3 vertices")
    g = circulant(n, [1])
    return Graph(g.n, g.edges, vertex_transitive=True, name=f"C_{n}")


def petersen() -> Graph:
    outer = [(i, i % 5 + 1) for i in range(1, 6)]
    spokes = [(i, i + 5) for i in range(1, 6)]
    inner = [(6 + i, 6 + (i + 2) % 5) for i in range(5)]
    return Graph.from_edges(10, outer + spokes + inner,
                            vertex_transitive=True, name="petersen")


def clique_union(*sizes: int) -> Graph:
    """Disjoint union of complete graphs ``K_{n1} ∪ ... ∪ K_{nk}``."""
    if not sizes:
        raise ValueError("clique_union needs at least one part")
    sizes = [_check_size(s, "clique size") for s in sizes]
    edges, offset = set(), 0
    for s in sizes:
        edges.update(itertools.combinations(range(offset + 1, offset + s + 1), 2))
        offset += s
    return Graph(offset, frozenset(edges),
                 vertex_transitive=len(set(sizes)) == 1,
                 name="G(" + ",".join(map(str, sizes)) + ")")


def clique_plus_isolated(n1: int, m: int) -> Graph:
    """``K_{n1}`` together with ``m`` isolated vertices."""
    n1 = _check_size(n1, "n1")
    if int(m) != m or m < 0:
        raise ValueError(f"m must be a nonnegative integer, got {m!r}")
    g = clique_union(n1, *([1] * int(m)))
    return Graph(g.n, g.edges, vertex_transitive=(m == 0 or n1 == 1),
                 name=f"G({n1},e_{m})")


def random_graph(n: int, p: float = 0.5, seed=None) -> Graph:
    rng = np.random.default_rng(seed)
    pairs = list(itertools.combinations(range(1, n + 1), 2))
    keep = rng.random(len(pairs)) < p
    return Graph(n, frozenset(pr for pr, k in zip(pairs, keep) if k))


FAMILIES = {
    "complete": complete,
    "empty": empty,
    "cycle": cycle,
    "path": path,
    "petersen": petersen,
    "clique_union": clique_union,
    "clique_plus_isolated": clique_plus_isolated,
    "circulant": None,  # n;offsets, handled in parse_family
}


def generate(family: str, *params) -> Graph:
    """Build a named family, e.g. ``generate("clique_union", 4, 3, 2)``.

    ``circulant`` takes ``n`` followed by its offsets.
    """
    if family not in FAMILIES:
        raise ValueError(f"unknown family {family!r}; expected one of {sorted(FAMILIES)}")
    if family == "circulant":
        if len(params) < 2:
            raise ValueError("circulant needs n and at least one offset")
        return circulant(params[0], params[1:])
    return FAMILIES[family](*params)


def parse_family(spec: str) -> Graph:
    """Parse ``family:p1,p2,...`` (``petersen`` takes no parameters)."""
    name, _, rest = spec.partition(":")
    name = name.strip()
    try:
        params = [int(p) for p in rest.replace(";", ",").split(",") if p.strip()]
    except ValueError as exc:
        raise ValueError(f"bad family parameters in {spec!r}") from exc
    return generate(name, *params)


# ------------------------------------------------------------------- DIMACS

def parse_dimacs(text: str) -> Graph:
    n = declared = None
    edges = set()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        tok = line.split()
        if tok[0] == "p":
            if n is not None:
                raise DimacsError(f"line {lineno}: second problem line")
            if len(tok) != 4 or tok[1] not in ("edge", "col"):
                raise DimacsError(f"line {lineno}: expected 'p edge <n> <m>'")
            try:
                n, declared = int(tok[2]), int(tok[3])
            except ValueError:
                raise DimacsError(f"line {lineno}: non-integer sizes") from None
            if n < 1:
                raise DimacsError(f"line {lineno}: vertex count must be positive")
        elif tok[0] == "e":
            if n is None:
                raise DimacsError(f"line {lineno}: edge before problem line")
            if len(tok) != 3:
                raise DimacsError(f"line {lineno}: expected 'e <i> <j>'")
            try:
                i, j = int(tok[1]), int(tok[2])
            except ValueError:
                raise DimacsError(f"line {lineno}: non-integer vertex") from None
            if not (1 <= i <= n and 1 <= j <= n):
                raise DimacsError(f"line {lineno}: vertex outside 1..{n}")
            if i == j:
                raise DimacsError(f"line {lineno}: self-loop at vertex {i}")
            edges.add(_pair(i, j))
        else:
            raise DimacsError(f"line {lineno}: unknown record {tok[0]!r}")
    if n is None:
        raise DimacsError("missing 'p edge' problem line")
    if declared != len(edges):
        warnings.warn(f"header declares {declared} edges, found {len(edges)} distinct",
                      stacklevel=2)
    return Graph(n, frozenset(edges))


def write_dimacs(g: Graph, comment: str | None = None) -> str:
    lines = [f"c {c}" for c in (comment or "").splitlines()]
    lines.append(f"p edge {g.n} {g.m}")
    lines.extend(f"e {i} {j}" for i, j in sorted(g.edges))
    return "\n".join(lines) + "\n"


def read_dimacs(path) -> Graph:
    with open(path) as fh:
        return parse_dimacs(fh.read())
