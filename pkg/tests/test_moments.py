import itertools

import numpy as np
import pytest

from conftest import small_graphs
from projtheta.conic import solve_conic
from projtheta.exact import GuardExceeded, chi_exact
from projtheta.graph import (clique_plus_isolated, clique_union, complement, complete, cycle,
                             empty, random_graph)
from projtheta.moments import (PRIME_GUARD, SymTensor3, build_hat_theta_prime, canonical_index,
                               colouring_point, hat_theta_prime, recover_r, recovery_defect,
                               slices_from_solution, storage_classes, tensor_from_solution,
                               tensor_size)
from projtheta.theta import eval_bound, hat_theta


def test_canonical_index_examples():
    assert canonical_index(3, 1, 2, 3) == canonical_index(1, 2, 3, 3)
    assert canonical_index(2, 2, 1, 3) == canonical_index(1, 2, 2, 3)
    offsets = {canonical_index(i, j, l, 9)
               for i, j, l in itertools.product(range(1, 10), repeat=3)}
    assert len(offsets) == 165 == tensor_size(9)
    assert offsets == set(range(165))


@pytest.mark.parametrize("n", [1, 2, 4, 7])
def test_canonical_index_is_lexicographic(n):
    triples = list(itertools.combinations_with_replacement(range(1, n + 1), 3))
    assert [canonical_index(*t, n) for t in triples] == list(range(len(triples)))
    for t in triples:
        assert len({canonical_index(*p, n) for p in itertools.permutations(t)}) == 1


def test_canonical_index_range():
    with pytest.raises(ValueError):
        canonical_index(0, 1, 1, 3)
    with pytest.raises(ValueError):
        canonical_index(1, 4, 1, 3)


def test_sym_tensor():
    t = SymTensor3.from_function(4, lambda i, j, l: i * 100 + j * 10 + l)
    assert t[3, 1, 2] == t[2, 3, 1] == 123
    for s in t.slices():
        assert np.array_equal(s, s.T)
    t[4, 1, 1] = -1.0
    assert t[1, 4, 1] == -1.0
    with pytest.raises(ValueError):
        SymTensor3(3, np.zeros(5))
    with pytest.raises(ValueError):
        SymTensor3(0)


def test_colouring_tensor():
    t = SymTensor3.from_colouring([[1, 2], [3]], 3)
    assert t.merged()
    assert t[1, 1, 2] == 0.25 and t[3, 3, 3] == 1.0 and t[1, 2, 3] == 0.0
    slices = t.slices()
    assert all(s.sum() == pytest.approx(1.0) for s in slices)
    assert np.allclose(recover_r(slices), [[0.5, 0.5, 0], [0.5, 0.5, 0], [0, 0, 1]])
    assert recovery_defect(slices) <= 1e-15


def test_storage_classes():
    g = complete(3)
    assert storage_classes(g) == [(1,), (2,), (3,), (1, 2), (1, 3), (2, 3), (1, 2, 3)]
    assert storage_classes(empty(3)) == [(1,), (2,), (3,)]
    assert len(storage_classes(empty(3), eliminate=False)) == 7


@pytest.mark.parametrize("n", [1, 3, 5])
def test_complete_graph(n):
    assert hat_theta_prime(complete(n)).value == pytest.approx(1.0, abs=1e-6)


@pytest.mark.parametrize("n", [1, 3, 5])
def test_empty_graph(n):
    assert hat_theta_prime(empty(n)).value == pytest.approx(float(n), abs=1e-6)


@pytest.mark.parametrize("g,expected,tol", [
    (complement(clique_union(4, 3, 2)), 3.968, 2e-3),
    (complement(clique_plus_isolated(8, 1)), 8.0, 2e-3),
    (complement(clique_union(3, 3, 3)), 3.0, 1e-5),
    (complement(clique_plus_isolated(5, 4)), 4.905, 2e-3),
], ids=["G(4,3,2)", "G(8,e1)", "G(3,3,3)", "G(5,e4)"])
def test_table_examples(g, expected, tol):
    b = hat_theta_prime(g)
    assert b.kind == "theta_hat_prime"
    assert b.value == pytest.approx(expected, abs=tol)


def test_row_sums_reported_dependent():
    g = complement(clique_union(3, 2))
    p = build_hat_theta_prime(g)
    s = solve_conic(p)
    dropped = {p.labels[i] for i in s.dropped_rows}
    assert len(dropped) == g.n
    # exactly one of each {normalisation, row sum} pair is redundant per vertex
    assert all(lab.startswith(("row sum", "slice")) for lab in dropped)


@pytest.mark.parametrize("seed", range(4))
def test_elimination_matches_full_build(seed):
    g = random_graph(5 + seed % 2, 0.5, seed=40 + seed)
    a = solve_conic(build_hat_theta_prime(g))
    b = solve_conic(build_hat_theta_prime(g, eliminate=False))
    assert a.status == b.status == "optimal"
    assert abs(a.primal_obj - b.primal_obj) <= 1e-6


def test_recovery_at_solution():
    g = random_graph(6, 0.6, seed=3)
    b = hat_theta_prime(g)
    slices = slices_from_solution(g, b.solution.x)
    assert recovery_defect(slices) <= 1e-8
    r = recover_r(slices)
    assert np.allclose(r.sum(axis=1), 1.0, atol=1e-8)
    assert np.trace(r) == pytest.approx(b.value, abs=1e-8)
    t = tensor_from_solution(g, b.solution.x)
    for i, s in enumerate(slices, start=1):
        assert np.allclose(s, t.slice(i), atol=1e-8)


def test_colouring_point_feasible():
    g = complement(clique_union(3, 2, 2))
    p = build_hat_theta_prime(g)
    # a colouring of clique_union(3, 2, 2) uses stable sets, i.e. cliques of g
    x = colouring_point(g, [[1, 4, 6], [2, 5, 7], [3]])
    assert np.linalg.norm(p.A @ x - p.b) <= 1e-12
    assert float(p.c @ x) == pytest.approx(3.0)


def test_ordering_and_upper_bound():
    for seed in range(5):
        g = random_graph(6, 0.5, seed=70 + seed)
        assert hat_theta(g) <= hat_theta_prime(g).value + 1e-5
        assert hat_theta_prime(complement(g)).value <= chi_exact(g)[0] + 1e-5


@pytest.mark.parametrize("n1,n2", [(n1, n2) for n1 in range(1, 9) for n2 in range(1, n1 + 1)
                                   if n1 + n2 <= 9])
def test_two_clique_exactness(n1, n2):
    g = complement(clique_union(n1, n2))
    assert hat_theta_prime(g).value == pytest.approx(max(n1, n2), abs=1e-4)


def test_small_graph_agreement_on_chi():
    # the moment bound never exceeds chi and never undercuts theta_hat
    for g in small_graphs(4):
        v = hat_theta_prime(complement(g)).value
        assert hat_theta(complement(g)) - 1e-5 <= v <= chi_exact(g)[0] + 1e-5


def test_guard():
    with pytest.raises(GuardExceeded):
        hat_theta_prime(empty(PRIME_GUARD + 1))
    with pytest.raises(GuardExceeded):
        eval_bound("theta_hat_prime", complete(PRIME_GUARD + 1))
