"""Named example games and random game generators."""
from __future__ import annotations

import random

import numpy as np

from .game_model import EdgeWeights, GameGraph, LeafOutcomes, PreferenceTable, payoff
from .strategy import MooreMachine, MooreProfile, positional_profile


def fig1() -> GameGraph:
    """Two-player game with a weak SPE but no SPE.

    Player p1 owns v0, v2, v3; player p2 owns v1.  The cycle (v0 v1) has
    outcome o1, the leaves v2 and v3 have outcomes o2 and o3.
    """
    prefs = PreferenceTable.symbolic(
        ("o1", "o2", "o3"), [("o1", "o2", "o3"), ("o2", "o3", "o1")])
    succ = ((1, 2), (0, 3), (2,), (3,))
    return GameGraph(("p1", "p2"), ("v0", "v1", "v2", "v3"), (0, 1, 0, 0), succ,
                     LeafOutcomes({2: "o2", 3: "o3"}), prefs, 0, (((0, 1), "o1"),))


def fig1_thick_profile(game: GameGraph | None = None) -> MooreProfile:
    """p1 moves v0 -> v1, p2 moves v1 -> v3."""
    game = game or fig1()
    return positional_profile(game, {0: 1, 1: 3})


def g_n(n: int) -> GameGraph:
    """The n-player ring game: v_i -> v_{i+1}, v_i -> l_i, bottom cycle outcome "bot".

    Vertices are ordered v1..vn, l1..ln; player i owns v_i and l_i.  Player i
    ranks bot < o_{i-1} < o_i below every other o_j, the latter ascending in j.
    """
    if n < 3:
        raise ValueError("G_n needs n >= 3")
    outs = ["bot"] + [f"o{j}" for j in range(1, n + 1)]
    orders = []
    for i in range(1, n + 1):
        prev = (i - 2) % n + 1
        rest = [f"o{j}" for j in range(1, n + 1) if j not in (prev, i)]
        orders.append(["bot", f"o{prev}", f"o{i}"] + rest)
    prefs = PreferenceTable.symbolic(outs, orders)
    vertices = [f"v{i}" for i in range(1, n + 1)] + [f"l{i}" for i in range(1, n + 1)]
    owner = list(range(n)) * 2
    succ = [((i + 1) % n, n + i) for i in range(n)] + [(n + i,) for i in range(n)]
    leaves = LeafOutcomes({n + i: f"o{i + 1}" for i in range(n)})
    return GameGraph(tuple(f"p{i}" for i in range(1, n + 1)), tuple(vertices), tuple(owner),
                     tuple(succ), leaves, prefs, 0, ((tuple(range(n)), "bot"),))


def ring_profile(n: int) -> MooreProfile:
    """The memory-(n-1) weak SPE of G_n from v1.

    Player i counts its visits to v_i modulo n-1 and enters l_i on count 0.
    Along the ring the leaves are offered by players 1, n, n-1, ... in turn,
    which fixes each player's initial counter.
    """
    k = n - 1
    machines = []
    for i in range(n):
        update = np.zeros((k, 2 * n), dtype=np.int64)
        move = np.full((k, 2 * n), -1, dtype=np.int64)
        for m in range(k):
            update[m, :] = m
            update[m, i] = (m + 1) % k
            move[m, i] = n + i if m == 0 else (i + 1) % n
            move[m, n + i] = n + i
        # player 1 leaves first; player i (i >= 2) on its visit number n+1-i
        initial = 0 if i == 0 else (1 - (n - i)) % k
        machines.append(MooreMachine(i, update, move, initial))
    return MooreProfile(tuple(machines))


# ---------------------------------------------------------------------------
# random instances


def random_arena(rng: random.Random, n: int, max_degree: int, forward_bias: float = 0.0,
                 sink_rate: float = 0.0) -> list:
    """Random successor lists.

    Uniform edges tend to make one big strongly connected component.  With
    ``forward_bias`` an edge mostly points to a higher index, and with
    ``sink_rate`` a vertex other than 0 keeps only its self-loop; together
    they give several bottom components and long approach paths from 0.
    """
    succ = []
    for v in range(n):
        if v > 0 and rng.random() < sink_rate:
            succ.append([v])
            continue
        k = rng.randint(1, min(max_degree, n))
        targets = set()
        while len(targets) < k:
            if v + 1 < n and rng.random() < forward_bias:
                targets.add(rng.randrange(v + 1, n))
            else:
                targets.add(rng.randrange(n))
            if len(targets) < k and len(targets) == n:
                break
        succ.append(sorted(targets))
    return succ


def random_mean_payoff_game(rng: random.Random, max_vertices: int = 12, max_degree: int = 3,
                            max_players: int = 4, weights=range(-2, 3),
                            aggregator: str = "mean-payoff", forward_bias: float = 0.0,
                            sink_rate: float = 0.0) -> GameGraph:
    n = rng.randint(1, max_vertices)
    k = rng.randint(1, max_players)
    owner = [rng.randrange(k) for _ in range(n)]
    succ = random_arena(rng, n, max_degree, forward_bias, sink_rate)
    w = {(v, t): tuple(rng.choice(weights) for _ in range(k)) for v in range(n) for t in succ[v]}
    return GameGraph(tuple(f"p{i}" for i in range(k)), tuple(f"v{v}" for v in range(n)),
                     tuple(owner), tuple(map(tuple, succ)), EdgeWeights(w, aggregator),
                     PreferenceTable.vector(k), 0)


def random_shared_order_game(rng: random.Random, max_vertices: int = 12, max_degree: int = 3,
                             max_players: int = 4, n_outcomes: int = 4,
                             forward_bias: float = 0.0, sink_rate: float = 0.0) -> GameGraph:
    """Symbolic game, every player with the same order; outcomes on cycles via overrides.

    Each bottom component gets an outcome through an override of its
    smallest simple cycle, so every constructed profile can be evaluated.
    """
    from .graph_analysis import bottom_sccs, smallest_simple_cycle

    n = rng.randint(1, max_vertices)
    k = rng.randint(1, max_players)
    owner = [rng.randrange(k) for _ in range(n)]
    succ = random_arena(rng, n, max_degree, forward_bias, sink_rate)
    outs = tuple(f"o{j}" for j in range(1, n_outcomes + 1))
    order = list(outs)
    rng.shuffle(order)
    prefs = PreferenceTable.symbolic(outs, [order] * k)
    names = tuple(f"v{v}" for v in range(n))
    players = tuple(f"p{i}" for i in range(k))
    draft = GameGraph(players, names, tuple(owner), tuple(map(tuple, succ)),
                      LeafOutcomes({v: outs[0] for v in range(n) if succ[v] == [v]}), prefs, 0)
    overrides = []
    leaf_out = {}
    for comp in bottom_sccs(draft).bottom_components:
        o = rng.choice(outs)
        if len(comp) == 1 and comp[0] in draft.leaves:
            leaf_out[comp[0]] = o
        else:
            overrides.append((smallest_simple_cycle(draft, comp).cycle, o))
    return GameGraph(players, names, tuple(owner), tuple(map(tuple, succ)),
                     LeafOutcomes(leaf_out), prefs, 0, tuple(overrides))


def random_tree_game(rng: random.Random, max_depth: int = 6, max_branching: int = 3,
                     max_players: int = 4, n_outcomes: int = 5, max_vertices: int = 400):
    """Finite tree rooted at vertex 0 with leaf self-loops and random symbolic preferences.

    Returns ``(game, depth)``.
    """
    k = rng.randint(1, max_players)
    outs = tuple(f"o{j}" for j in range(1, n_outcomes + 1))
    orders = []
    for _ in range(k):
        order = list(outs)
        rng.shuffle(order)
        orders.append(order)
    prefs = PreferenceTable.symbolic(outs, orders)
    children = [[]]
    level = [0]
    frontier = [0]
    while frontier:
        v = frontier.pop(0)
        if level[v] >= max_depth or (v > 0 and rng.random() < 0.3):
            continue
        for _ in range(rng.randint(1, max_branching)):
            if len(children) >= max_vertices:
                break
            w = len(children)
            children.append([])
            level.append(level[v] + 1)
            children[v].append(w)
            frontier.append(w)
    n = len(children)
    succ = tuple(tuple(c) if c else (v,) for v, c in enumerate(children))
    owner = tuple(rng.randrange(k) for _ in range(n))
    leaf_out = {v: rng.choice(outs) for v in range(n) if not children[v]}
    game = GameGraph(tuple(f"p{i}" for i in range(k)), tuple(f"t{v}" for v in range(n)), owner,
                     succ, LeafOutcomes(leaf_out), prefs, 0)
    return game, max(level)


__all__ = ["fig1", "fig1_thick_profile", "g_n", "ring_profile", "random_mean_payoff_game",
           "random_shared_order_game", "random_tree_game", "payoff"]
