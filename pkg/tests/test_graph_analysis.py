import pytest
from conftest import arena, dfs_reach, rng_of, scc_oracle, seeds, simple_cycles
from hypothesis import given, settings

from weakspe.errors import NoCycle
from weakspe.game_model import EdgeWeights, GameGraph, PreferenceTable
from weakspe.graph_analysis import (
    attractor,
    backward_reach_within,
    bottom_sccs,
    smallest_simple_cycle,
    tarjan_sccs,
)


def graph(n, succ, owner=None):
    owner = owner or [0] * n
    k = max(owner) + 1
    w = {(v, t): (0,) * k for v in range(n) for t in succ[v]}
    return GameGraph(tuple(f"p{i}" for i in range(k)), tuple(f"v{v}" for v in range(n)),
                     tuple(owner), tuple(map(tuple, succ)), EdgeWeights(w), PreferenceTable.vector(k))


@settings(max_examples=200)
@given(seeds)
def test_tarjan_matches_warshall(seed):
    n, succ = arena(rng_of(seed))
    comps = tarjan_sccs(range(n), succ)
    assert {frozenset(c) for c in comps} == scc_oracle(n, succ)
    assert sorted(v for c in comps for v in c) == list(range(n))


@settings(max_examples=200)
@given(seeds)
def test_bottom_components_have_no_exit(seed):
    n, succ = arena(rng_of(seed))
    g = graph(n, succ)
    dec = bottom_sccs(g)
    bottoms = dec.bottom_components
    assert bottoms
    for comp in bottoms:
        assert all(w in comp for v in comp for w in succ[v])
    # every vertex reaches some bottom component
    targets = {v for c in bottoms for v in c}
    for v in range(n):
        assert dfs_reach(succ, [v], set(range(n))) & targets


def test_g4_bottom_components_are_the_leaves(g4):
    assert bottom_sccs(g4).bottom_components == [(4,), (5,), (6,), (7,)]


@settings(max_examples=200)
@given(seeds)
def test_backward_reach_matches_dfs(seed):
    rng = rng_of(seed)
    n, succ = arena(rng)
    g = graph(n, succ)
    allowed = {v for v in range(n) if rng.random() < 0.7}
    targets = {v for v in range(n) if rng.random() < 0.3}
    got = backward_reach_within(g, allowed, targets)
    want = {v for v in allowed if dfs_reach(succ, [v], allowed) & targets}
    assert got == want


def brute_attractor(n, succ, owner, target, coalition, allowed):
    attr = set(target) & allowed
    changed = True
    while changed:
        changed = False
        for v in allowed - attr:
            inside = [w for w in succ[v] if w in allowed]
            if owner[v] in coalition:
                hit = any(w in attr for w in inside)
            else:
                hit = all(w in attr for w in inside)
            if hit:
                attr.add(v)
                changed = True
    return attr


@settings(max_examples=200)
@given(seeds)
def test_attractor_matches_fixpoint_iteration(seed):
    rng = rng_of(seed)
    n, succ = arena(rng)
    owner = [rng.randrange(2) for _ in range(n)]
    g = graph(n, succ, owner)
    # the subgraph must keep an edge at every vertex
    allowed = set(range(n))
    target = {v for v in range(n) if rng.random() < 0.3}
    assert attractor(g, target, {0}, allowed) == brute_attractor(n, succ, owner, target, {0}, allowed)


def test_attractor_opponent_needs_all_edges():
    # v0 (player 1) -> v1 | v2, only v1 is a target
    g = graph(3, [[1, 2], [1], [2]], [1, 0, 0])
    assert attractor(g, {1}, {0}) == {1}
    assert attractor(g, {1}, {1}) == {0, 1}


@settings(max_examples=200)
@given(seeds)
def test_smallest_cycle_is_shortest_and_first(seed):
    n, succ = arena(rng_of(seed))
    g = graph(n, succ)
    for comp in bottom_sccs(g).bottom_components:
        cycles = simple_cycles(succ, comp)
        got = smallest_simple_cycle(g, comp).cycle
        shortest = min(len(c) for c in cycles)
        assert got in cycles
        assert len(got) == shortest
        assert got == min(c for c in cycles if len(c) == shortest)


def test_smallest_cycle_examples(g4):
    assert smallest_simple_cycle(g4, (0, 1, 2, 3)).cycle == (0, 1, 2, 3)
    assert smallest_simple_cycle(g4, (5,)).cycle == (5,)
    with pytest.raises(NoCycle):
        smallest_simple_cycle(g4, (0,))
