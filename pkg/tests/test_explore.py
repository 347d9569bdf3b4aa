import itertools
import random

import pytest

from clusteralg import (
    LaurentViolation,
    Seed,
    collect_cluster_variables,
    explore_exchange_graph,
    is_finite_type,
    laurent_audit,
    parse_element,
    permute_seed,
)
from clusteralg.explore import all_words
from clusteralg.seed import mutate_seed
from oracles import bfs_closure

# frozen from the sympy brute-force oracle (tests/oracles.py)
CLOSURE = {
    "A2": ([[0, -1], [1, 0]], 5, 5),
    "A3": ([[0, 1, 0], [-1, 0, 1], [0, -1, 0]], 14, 9),
    "B2": ([[0, 1], [-2, 0]], 6, 6),
}


def _seed(B):
    return Seed.initial([f"x{i + 1}" for i in range(len(B))], B)


@pytest.mark.parametrize("name", sorted(CLOSURE))
def test_closure_counts(name):
    B, seeds, nvars = CLOSURE[name]
    g = explore_exchange_graph(_seed(B), max_depth=20)
    assert g.closed
    assert len(g) == seeds
    assert len(collect_cluster_variables(g)) == nvars


@pytest.mark.parametrize("name", sorted(CLOSURE))
def test_oracle_agrees_with_frozen_counts(name):
    B, seeds, nvars = CLOSURE[name]
    closed, count, variables = bfs_closure(B, 20)
    assert (closed, count, len(variables)) == (True, seeds, nvars)


def test_variables_match_oracle_expressions(a3):
    import sympy

    _, _, oracle_vars = bfs_closure(CLOSURE["A3"][0], 20)
    xs = sympy.symbols("x1:4")
    ours = {sympy.cancel(sympy.sympify(p.as_fraction().replace("^", "**"))) for p in
            collect_cluster_variables(explore_exchange_graph(a3))}
    assert ours == {sympy.cancel(v) for v in oracle_vars}
    assert all(v.free_symbols <= set(xs) for v in ours)


def test_a2_variables_are_the_worked_example(a2):
    g = explore_exchange_graph(a2, max_depth=10)
    expected = {parse_element(s, a2.names) for s in
                ["x1", "x2", "(x2+1)/x1", "(x1+x2+1)/(x1*x2)", "(x1+1)/x2"]}
    assert g.closed and len(g) == 5
    assert set(collect_cluster_variables(g)) == expected


def test_kronecker_does_not_close(kronecker):
    g = explore_exchange_graph(kronecker, max_depth=6)
    assert not g.closed
    closed, _, _ = bfs_closure([[0, 2], [-2, 0]], 6)
    assert not closed


def test_bounds_cut_off_exploration(a3):
    g = explore_exchange_graph(a3, max_seeds=5)
    assert not g.closed and len(g) == 5
    g = explore_exchange_graph(a3, max_depth=0)
    assert not g.closed and len(g) == 1


def test_rank_zero():
    s = Seed.initial([], [])
    g = explore_exchange_graph(s)
    assert g.closed and len(g) == 1
    assert collect_cluster_variables(g) == ()
    assert is_finite_type(s) is True


def test_is_finite_type(a2, kronecker):
    assert is_finite_type(a2) is True
    assert is_finite_type(kronecker, max_seeds=50) is None


def test_edge_symmetry(a3):
    g = explore_exchange_graph(a3)
    edges = set(g.edges)
    for a, k, b in g.edges:
        raw_a, raw_b = g.nodes[a].raw, g.nodes[b].raw
        new_var = mutate_seed(raw_a, k).cluster[k]
        k_back = raw_b.cluster.index(new_var)
        assert (b, k_back, a) in edges
    assert len(g.edges) == len(g) * a3.rank


def test_node_count_permutation_invariant(a3):
    base = explore_exchange_graph(a3)
    for perm in itertools.permutations(range(3)):
        g = explore_exchange_graph(permute_seed(a3, perm))
        assert set(g.nodes) == set(base.nodes)


def test_inventory_independent_of_start(a3):
    base = explore_exchange_graph(a3)
    inventory = collect_cluster_variables(base)
    for node in list(base.nodes.values())[::3]:
        assert collect_cluster_variables(explore_exchange_graph(node.seed)) == inventory


def test_deterministic(a3):
    g1 = explore_exchange_graph(a3)
    g2 = explore_exchange_graph(a3)
    assert list(g1.nodes) == list(g2.nodes)
    assert g1.edges == g2.edges


def test_laurent_audit_a2(a2):
    report = laurent_audit(a2, all_words(2, 5))
    assert len(report.entries) == 63
    assert laurent_audit(a2, [()]).entries[0].depth == 0


def test_laurent_audit_kronecker_random(kronecker):
    rng = random.Random(3)
    words = [tuple(rng.randrange(2) for _ in range(rng.randint(0, 8))) for _ in range(100)]
    report = laurent_audit(kronecker, words)
    assert report.max_terms > 1


def test_laurent_audit_reports_word_and_step(monkeypatch, a2):
    import clusteralg.explore as explore_mod

    real = explore_mod.mutate_seed

    def broken(s, k):
        if k == 1:
            raise LaurentViolation("boom")
        return real(s, k)

    monkeypatch.setattr(explore_mod, "mutate_seed", broken)
    with pytest.raises(LaurentViolation) as info:
        laurent_audit(a2, [(0, 0, 1)])
    assert info.value.word == (0, 0, 1)
    assert info.value.step == 2
