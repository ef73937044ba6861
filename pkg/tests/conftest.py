import itertools
import random
import sys

import pytest
from hypothesis import strategies as st

from weakspe.game_model import EdgeWeights, GameGraph, LeafOutcomes, PreferenceTable
from weakspe.graph_analysis import bottom_sccs, smallest_simple_cycle
from weakspe.games import fig1, g_n


@pytest.fixture
def g4():
    return g_n(4)


@pytest.fixture
def f1():
    return fig1()


# ---------------------------------------------------------------------------
# independent oracles


def closure(n, succ):
    """Warshall transitive closure; reach[u][v] iff a nonempty path u -> v."""
    reach = [[False] * n for _ in range(n)]
    for u in range(n):
        for v in succ[u]:
            reach[u][v] = True
    for k in range(n):
        for i in range(n):
            if reach[i][k]:
                for j in range(n):
                    if reach[k][j]:
                        reach[i][j] = True
    return reach


def scc_oracle(n, succ):
    reach = closure(n, succ)
    comps = set()
    for u in range(n):
        comps.add(frozenset({u} | {v for v in range(n) if reach[u][v] and reach[v][u]}))
    return comps


def dfs_reach(succ, sources, allowed):
    seen = set()
    stack = [s for s in sources if s in allowed]
    while stack:
        v = stack.pop()
        if v in seen:
            continue
        seen.add(v)
        stack.extend(w for w in succ[v] if w in allowed)
    return seen


def simple_cycles(succ, comp):
    """All simple cycles inside ``comp`` by brute force, each as a tuple starting at its min."""
    comp = sorted(comp)
    out = set()
    for k in range(1, len(comp) + 1):
        for perm in itertools.permutations(comp, k):
            if perm[0] != min(perm):
                continue
            if all(perm[(i + 1) % k] in succ[perm[i]] for i in range(k)):
                out.add(perm)
    return out


# ---------------------------------------------------------------------------
# generators


def arena(rng, max_vertices=8, max_degree=3):
    n = rng.randint(1, max_vertices)
    # a third of the arenas get self-loop sinks, so several bottom components
    sink = 0.3 if rng.random() < 1 / 3 else 0.0
    return n, [[v] if v and rng.random() < sink else
               sorted(rng.sample(range(n), rng.randint(1, min(max_degree, n)))) for v in range(n)]


def random_symbolic_game(rng, max_vertices=10, max_players=4, n_outcomes=5, orders=None):
    """Symbolic game; bottom components get outcomes through leaves or cycle overrides."""
    n, succ = arena(rng, max_vertices)
    k = rng.randint(1, max_players)
    owner = [rng.randrange(k) for _ in range(n)]
    outs = tuple(f"o{j}" for j in range(1, n_outcomes + 1))
    if orders is None:
        orders = [rng.sample(outs, len(outs)) for _ in range(k)]
    else:
        orders = orders(rng, outs, k)
    prefs = PreferenceTable.symbolic(outs, orders)
    players = tuple(f"p{i}" for i in range(k))
    names = tuple(f"v{v}" for v in range(n))
    draft = GameGraph(players, names, tuple(owner), tuple(map(tuple, succ)),
                      LeafOutcomes({v: outs[0] for v in range(n) if succ[v] == [v]}), prefs, 0)
    leaf_out, overrides = {}, []
    for comp in bottom_sccs(draft).bottom_components:
        o = rng.choice(outs)
        if len(comp) == 1 and comp[0] in draft.leaves:
            leaf_out[comp[0]] = o
        else:
            overrides.append((smallest_simple_cycle(draft, comp).cycle, o))
    return GameGraph(players, names, tuple(owner), tuple(map(tuple, succ)),
                     LeafOutcomes(leaf_out), prefs, 0, tuple(overrides))


def random_leafed_game(rng, max_inner=8, max_leaves=4, max_players=4, n_outcomes=4):
    """Leafed game in which every inner vertex reaches a leaf; the non-leaf cycles get
    no outcome, so only plays ending in leaves may be evaluated."""
    m = rng.randint(1, max_inner)
    n_leaves = rng.randint(1, max_leaves)
    n = m + n_leaves
    k = rng.randint(1, max_players)
    succ = []
    for v in range(m):
        targets = set(rng.sample(range(n), rng.randint(1, min(3, n)))) - {v}
        if not targets or rng.random() < 0.4:
            targets.add(m + rng.randrange(n_leaves))
        succ.append(sorted(targets))
    succ += [[v] for v in range(m, n)]
    # make sure every inner vertex reaches a leaf: link stragglers to a leaf
    leaves = set(range(m, n))
    ok = dfs_reach_back(succ, leaves, n)
    for v in range(m):
        if v not in ok:
            succ[v].append(m)
    outs = tuple(f"o{j}" for j in range(1, n_outcomes + 1))
    prefs = PreferenceTable.symbolic(outs, [rng.sample(outs, len(outs)) for _ in range(k)])
    spec = LeafOutcomes({v: rng.choice(outs) for v in range(m, n)})
    return GameGraph(tuple(f"p{i}" for i in range(k)), tuple(f"v{v}" for v in range(n)),
                     tuple(rng.randrange(k) for _ in range(n)), tuple(map(tuple, succ)),
                     spec, prefs, 0)


def dfs_reach_back(succ, targets, n):
    pred = [[] for _ in range(n)]
    for v in range(n):
        for w in succ[v]:
            pred[w].append(v)
    return dfs_reach(pred, targets, set(range(n)))


def random_weighted_game(rng, max_vertices=8, max_players=3):
    n, succ = arena(rng, max_vertices)
    k = rng.randint(1, max_players)
    w = {(v, t): tuple(rng.randint(-2, 2) for _ in range(k)) for v in range(n) for t in succ[v]}
    return GameGraph(tuple(f"p{i}" for i in range(k)), tuple(f"v{v}" for v in range(n)),
                     tuple(rng.randrange(k) for _ in range(n)), tuple(map(tuple, succ)),
                     EdgeWeights(w), PreferenceTable.vector(k), 0)


seeds = st.integers(min_value=0, max_value=2**32 - 1)


def rng_of(seed):
    return random.Random(seed)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is not None and mod.LINES:
        terminalreporter.section("acceptance")
        for line in mod.LINES:
            terminalreporter.write_line(line)
