"""Acceptance suite; one PASS/FAIL line per criterion in the terminal summary."""

import random
import time

import sympy

from clusteralg import (
    Seed,
    au_differential,
    build_isolated_cover,
    collect_cluster_variables,
    exchange_identity_check,
    explore_exchange_graph,
    find_sink,
    freeze,
    freezing_commutes_check,
    laurent_audit,
    mutate_seed,
    parse_element,
)
from clusteralg.explore import all_words
from oracles import bfs_closure
from strategies import random_seed


def to_sympy(p):
    xs = sympy.symbols(p.names)
    return sum(c * sympy.Mul(*(x ** e for x, e in zip(xs, exps))) for exps, c in p.terms.items())


def test_1_a2_cluster_variables(a2, criterion):
    start = time.perf_counter()
    variables = collect_cluster_variables(explore_exchange_graph(a2))
    elapsed = time.perf_counter() - start
    expected = {parse_element(s, a2.names) for s in
                ["x1", "x2", "(x2+1)/x1", "(x1+x2+1)/(x1*x2)", "(x1+1)/x2"]}
    ok = set(variables) == expected and len(variables) == 5 and elapsed < 1.0
    criterion("1 A2 cluster variables", ok, f"{len(variables)} variables in {elapsed:.3f}s")
    assert ok


def test_2_freezing_generators(a2, criterion):
    def gens(S):
        return set(collect_cluster_variables(explore_exchange_graph(freeze(a2, S).seed)))

    at_x1 = gens([0]) == {parse_element(s, a2.names) for s in ["x2", "(x1+1)/x2"]}
    at_x2 = gens([1]) == {parse_element(s, a2.names) for s in ["x1", "(x2+1)/x1"]}
    ranks = freeze(a2, [0]).seed.rank == freeze(a2, [1]).seed.rank == 1
    ok = at_x1 and at_x2 and ranks
    criterion("2 freezing generator sets", ok, f"freeze x1: {at_x1}, freeze x2: {at_x2}")
    assert ok


def test_3_a2_cover(a2, criterion):
    leaves = build_isolated_cover(a2)
    labels = [leaf.label for leaf in leaves]
    ok = [leaf.S for leaf in leaves] == [(1,), (0,)] and all(leaf.seed.seed.B.is_zero() for leaf in leaves)
    criterion("3 A2 isolated cover", ok, ", ".join(labels))
    assert ok


def test_4_a_equals_u(a2, a3, criterion):
    start = time.perf_counter()
    r2 = au_differential(a2, 200, rng=0)
    r3 = au_differential(a3, 100, rng=0)
    elapsed = time.perf_counter() - start
    ok = r2.total == 200 and r3.total == 100 and r2.agree == 200 and r3.agree == 100 and elapsed < 30
    criterion(
        "4 A=U differential",
        ok,
        f"A2 {r2.agree}/{r2.total} ({r2.members} members), A3 {r3.agree}/{r3.total} "
        f"({r3.members} members) in {elapsed:.1f}s",
    )
    assert ok, (r2.disagreements, r3.disagreements)


def test_5_involution_and_commutation(criterion):
    rng = random.Random(5)
    involutions = 0
    for _ in range(1000):
        s = random_seed(rng, rng.randint(1, 4), frozen=rng.randint(0, 2))
        k = rng.randrange(s.rank)
        involutions += mutate_seed(mutate_seed(s, k), k) == s
    commutes = 0
    for _ in range(200):
        s = random_seed(rng, rng.randint(2, 4), frozen=rng.randint(0, 2), acyclic=True)
        i, j = rng.sample(range(s.rank), 2)
        commutes += freezing_commutes_check(s, i, j)
    ok = involutions == 1000 and commutes == 200
    criterion("5 involution and freezing commutation", ok, f"involution {involutions}/1000, commute {commutes}/200")
    assert ok


def test_6_laurent_audit(a2, kronecker, criterion):
    words = all_words(2, 8)
    r_a2 = laurent_audit(a2, words)
    rng = random.Random(6)
    random_words = [tuple(rng.randrange(2) for _ in range(rng.randint(0, 8))) for _ in range(500)]
    r_kr = laurent_audit(kronecker, random_words)
    ok = len(r_a2.entries) == len(words) == 511 and len(random_words) == 500
    criterion(
        "6 Laurent audit",
        ok,
        f"A2 {len(r_a2.entries)} words, Kronecker {len(random_words)} random words ({len(r_kr.entries)} distinct), 0 failures",
    )
    assert ok


def test_7_closure_counts(a3, kronecker, criterion):
    closed, seeds, oracle_vars = bfs_closure(a3.B.tolist(), 20)
    g = explore_exchange_graph(a3)
    ours = {sympy.cancel(to_sympy(p)) for p in collect_cluster_variables(g)}
    same_vars = ours == {sympy.cancel(v) for v in oracle_vars}
    kr = explore_exchange_graph(kronecker, max_depth=6)
    kr_oracle = bfs_closure(kronecker.B.tolist(), 6)[0]
    ok = (closed and g.closed and seeds == len(g) == 14 and len(ours) == 9 and same_vars
          and not kr.closed and not kr_oracle)
    criterion("7 closure counts", ok, f"A3 {len(g)} seeds, {len(ours)} variables; Kronecker closed at depth 6: {kr.closed}")
    assert ok


def test_8_exchange_identity(criterion):
    rng = random.Random(8)
    seeds = checks = passed = 0
    while seeds < 100:
        s = random_seed(rng, rng.randint(1, 4), frozen=rng.randint(1, 3), acyclic=True)
        seeds += 1
        for i in range(s.rank):
            if all(x <= 0 for x in s.B.column(i)):
                checks += 1
                passed += exchange_identity_check(s, i)
        assert find_sink(s.B) is not None
    ok = seeds >= 100 and passed == checks > 0
    criterion("8 exchange identity at sinks", ok, f"{passed}/{checks} sinks over {seeds} seeds")
    assert ok


