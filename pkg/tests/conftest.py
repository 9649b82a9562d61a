import itertools

import pytest

from projtheta.graph import Graph, random_graph

ACCEPTANCE_LINES = []


def random_suite(count=50, seed=1000):
    """The seeded random graphs used by the inequality checks, n in 5..8."""
    return [random_graph(5 + k % 4, 0.5, seed + k) for k in range(count)]


def canonical_form(g):
    best = None
    for perm in itertools.permutations(range(1, g.n + 1)):
        key = tuple(sorted(tuple(sorted((perm[i - 1], perm[j - 1]))) for i, j in g.edges))
        if best is None or key < best:
            best = key
    return best


def small_graphs(max_n=5):
    """One representative per isomorphism class for n <= max_n, via edge-subset enumeration."""
    out = []
    for n in range(1, max_n + 1):
        pairs = list(itertools.combinations(range(1, n + 1), 2))
        seen = set()
        for mask in range(1 << len(pairs)):
            g = Graph(n, frozenset(p for b, p in enumerate(pairs) if mask >> b & 1))
            key = canonical_form(g)
            if key not in seen:
                seen.add(key)
                out.append(g)
    return out


@pytest.fixture(scope="session")
def suite():
    return random_suite()


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
