"""Search for induced subgraphs on which the projection bound increases.

``theta_hat`` is not monotone under taking induced subgraphs: there are
``H <= G`` with ``theta_hat(H) > theta_hat(G)``.  The search below scans
candidate graphs and their connected proper induced subgraphs, smallest
first.  Disconnected subgraphs are skipped because the bound is additive
over connected components, so they only repeat what their components show.
"""
from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from typing import Callable, Iterable, Iterator

import numpy as np

from .conic import SolverConfig
from .graph import Graph, clique_union, complement, induced_subgraph, random_graph
from .theta import hat_theta

log = logging.getLogger(__name__)

MAX_SEARCH_VERTICES = 9


@dataclass(frozen=True)
class Witness:
    graph: Graph
    subset: tuple
    subgraph: Graph
    value_graph: float
    value_subgraph: float

    @property
    def excess(self) -> float:
        return self.value_subgraph - self.value_graph


def integer_partitions(n: int, largest: int | None = None) -> Iterator[tuple]:
    """Partitions of ``n`` in non-increasing order, lexicographically descending."""
    largest = n if largest is None else largest
    if n == 0:
        yield ()
        return
    for first in range(min(n, largest), 0, -1):
        for rest in integer_partitions(n - first, first):
            yield (first,) + rest


def default_candidates(max_vertices: int, n_random: int = 20, seed: int = 0) -> list[Graph]:
    """Complements of clique unions with 2..max_vertices vertices, then random graphs."""
    out = []
    for n in range(2, max_vertices + 1):
        for parts in integer_partitions(n):
            g = complement(clique_union(*parts))
            out.append(Graph(g.n, g.edges, name=f"co(G{parts})"))
    rng = np.random.default_rng(seed)
    lo = min(4, max_vertices)
    for k in range(n_random):
        n = int(rng.integers(lo, max_vertices + 1))
        g = random_graph(n, 0.5, int(rng.integers(2**31)))
        out.append(Graph(g.n, g.edges, name=f"random#{k}"))
    return out


def _is_connected(g: Graph) -> bool:
    return len(g.components()) == 1


def search_nonmonotone(candidates: Iterable[Graph], max_vertices: int = MAX_SEARCH_VERTICES,
                       tol: float = 1e-4, cfg: SolverConfig | None = None,
                       first_only: bool = True,
                       bound: Callable[[Graph], float] | None = None) -> list[Witness]:
    """Witnesses ``H <= G`` with ``bound(H) > bound(G) + tol``.

    Subsets are visited by size, then lexicographically; with ``first_only``
    the scan stops at the first witness overall.  Values are cached on the
    exact labelled edge set.
    """
    if max_vertices > MAX_SEARCH_VERTICES:
        raise ValueError(f"max_vertices is limited to {MAX_SEARCH_VERTICES}")
    evaluate = bound or (lambda h: hat_theta(h, cfg))
    cache: dict = {}

    def value(h: Graph) -> float:
        key = (h.n, h.edges)
        if key not in cache:
            cache[key] = evaluate(h)
        return cache[key]

    found = []
    for g in candidates:
        if g.n > max_vertices:
            raise ValueError(f"candidate {g!r} exceeds {max_vertices} vertices")
        vg = value(g)
        log.debug("candidate %r value %.6f", g, vg)
        for size in range(2, g.n):
            for subset in itertools.combinations(range(1, g.n + 1), size):
                h = induced_subgraph(g, subset)
                if not _is_connected(h):
                    continue
                vh = value(h)
                if vh > vg + tol:
                    found.append(Witness(g, subset, h, vg, vh))
                    if first_only:
                        return found
    return found
