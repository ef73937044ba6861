"""Equilibrium constructions.

* :func:`solve_weak_spe` -- finite-memory weak SPE of any finite game with a
  prefix-independent outcome: bottom components are collapsed into leaves,
  the leafed game is solved through the Remove/Adjust labeling, and the two
  levels are glued back together.
* :func:`uniform_weak_spe_layered` -- positional profile that is a weak SPE
  from every start vertex, for games whose bottom-component outcomes are
  layered.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np

from .errors import NotLayered, OutcomeMismatch
from .fixpoint import Labeling, _Ranks, run_fixpoint
from .game_model import GameGraph, Lasso, LeafOutcomes, outcome_of_lasso
from .graph_analysis import attractor, backward_reach_within, bottom_sccs, smallest_simple_cycle
from .strategy import MooreMachine, MooreProfile, minimize_profile, positional_profile
from .verify import reachable_product_states


# ---------------------------------------------------------------------------
# positional building blocks


def _reach_choices(game: GameGraph, cycles, within=None) -> dict:
    """Follow each cycle; everywhere else take a shortest path to a cycle vertex."""
    allowed = set(range(game.n)) if within is None else set(within)
    choice = {}
    for cyc in cycles:
        for k, v in enumerate(cyc):
            choice[v] = cyc[(k + 1) % len(cyc)]
    dist = {v: 0 for v in choice}
    queue = deque(sorted(choice))
    while queue:
        w = queue.popleft()
        for v in game.predecessors[w]:
            if v in allowed and v not in dist:
                dist[v] = dist[w] + 1
                queue.append(v)
    for v in sorted(allowed):
        if v in choice or v not in dist:
            continue
        choice[v] = min(w for w in game.successors[v]
                        if w in allowed and dist.get(w) == dist[v] - 1)
    return choice


def uniform_profile_for_scc(game: GameGraph, component, cycle: Lasso | None = None):
    """Positional profile on a bottom component and its outcome.

    Follows ``cycle`` (default: the smallest simple cycle of the component)
    and reaches it by shortest paths from the rest of the component.
    """
    if cycle is None:
        cycle = smallest_simple_cycle(game, component)
    outcome = outcome_of_lasso(game, cycle)
    choice = _reach_choices(game, [cycle.cycle], within=component)
    return positional_profile(game, choice), outcome


def uniform_profile_same_outcome(game: GameGraph, cycles, within=None) -> MooreProfile:
    """Positional profile producing the given cycles, all of one outcome."""
    cycles = [c if isinstance(c, Lasso) else Lasso((), tuple(c)) for c in cycles]
    outs = {outcome_of_lasso(game, c) for c in cycles}
    if len(outs) > 1:
        raise OutcomeMismatch(f"cycles have different outcomes: {sorted(map(str, outs))}")
    return positional_profile(game, _reach_choices(game, [c.cycle for c in cycles], within))


# ---------------------------------------------------------------------------
# collapsing bottom components


@dataclass(frozen=True, eq=False)
class LeafCollapse:
    """A game whose bottom components were turned into leaves.

    ``leafed`` has the same vertices as the original game; every vertex of a
    bottom component keeps only its self-loop and carries the outcome of the
    cycle chosen in its component.  ``inner`` holds the positional moves the
    original game uses inside the components.
    """

    original: GameGraph
    leafed: GameGraph
    components: tuple       # bottom components (sorted vertex tuples)
    cycles: tuple           # chosen Lasso per component
    outcomes: tuple         # outcome per component
    component_of: dict      # bottom-component vertex -> component position
    inner: dict             # bottom-component vertex -> successor
    identity: bool


def collapse_to_leafed(game: GameGraph, cycle_choice=None) -> LeafCollapse:
    """Replace every bottom SCC by leaves labeled with one of its cycle outcomes.

    ``cycle_choice(game, component)`` may override the default
    :func:`smallest_simple_cycle` choice.
    """
    dec = bottom_sccs(game)
    comps = dec.bottom_components
    pick = cycle_choice or smallest_simple_cycle
    cycles, outs, inner, comp_of = [], [], {}, {}
    for c, comp in enumerate(comps):
        cyc = pick(game, comp)
        o = outcome_of_lasso(game, cyc)
        cycles.append(cyc)
        outs.append(o)
        inner.update(_reach_choices(game, [cyc.cycle], within=comp))
        for v in comp:
            comp_of[v] = c
    identity = game.is_leafed and all(len(comp) == 1 and comp[0] in game.leaves for comp in comps)
    if identity:
        leafed = game
    else:
        succ = tuple((v,) if v in comp_of else game.successors[v] for v in range(game.n))
        leaf_out = {v: outs[comp_of[v]] for v in comp_of}
        overrides = tuple(
            (cyc, o) for cyc, o in game.cycle_outcomes
            if all(cyc[(k + 1) % len(cyc)] in succ[cyc[k]] for k in range(len(cyc))))
        leafed = GameGraph(game.players, game.vertices, game.owner, succ,
                           LeafOutcomes(leaf_out), game.prefs, game.initial, overrides)
    return LeafCollapse(game, leafed, tuple(comps), tuple(cycles), tuple(outs),
                        comp_of, inner, identity)


# ---------------------------------------------------------------------------
# weak SPE of a leafed game from the fixpoint labeling


def _forests(game: GameGraph, lab: Labeling) -> list:
    """Per outcome, a successor map on its holders leading to matching leaves."""
    forests = []
    pos = {o: k for k, o in enumerate(lab.outcomes)}
    for k, o in enumerate(lab.outcomes):
        bit = 1 << k
        holders = {v for v in range(game.n) if lab.masks[v] & bit}
        targets = [l for l, lo in game.spec.outcomes.items() if pos[lo] == k]
        dist = {l: 0 for l in targets}
        queue = deque(sorted(targets))
        while queue:
            w = queue.popleft()
            for v in game.predecessors[w]:
                if v in holders and v not in dist:
                    dist[v] = dist[w] + 1
                    queue.append(v)
        nxt = {l: l for l in targets}
        for v in holders:
            if v in nxt:
                continue
            nxt[v] = min(w for w in game.successors[v] if dist.get(w) == dist[v] - 1)
        forests.append(nxt)
    return forests


def weak_spe_from_labeling(game: GameGraph, lab: Labeling, v0: int | None = None,
                           o0=None) -> MooreProfile:
    """Finite-memory weak SPE of a leafed game from its fixpoint labeling.

    All players track the outcome ``o`` promised in the current subgame.  In
    state ``o`` the play follows a fixed shortest path to a leaf of outcome
    ``o`` through vertices labeled ``o``.  When a move enters a vertex that
    no longer carries ``o`` (necessarily a deviation), the promise becomes
    the deviator's best label of the new vertex that the deviator does not
    prefer to ``o``.  Memory states are ``init`` and ``(o, previous owner)``;
    each machine is minimized afterwards.
    """
    ranks = _Ranks(game, lab.outcomes)
    K = len(lab.outcomes)
    P = game.n_players
    forests = _forests(game, lab)

    def labels(v):
        return [k for k in range(K) if lab.masks[v] >> k & 1]

    def best_for(player, ks):
        return max(ks, key=lambda k: ranks.rank[player][k])

    start = {v: best_for(game.owner[v], labels(v)) for v in range(game.n)}
    if v0 is not None and o0 is not None:
        start[v0] = lab.outcomes.index(o0)

    holder_owners = {}
    for v in range(game.n):
        for k in range(K):
            holder_owners[(k, v)] = sorted({game.owner[u] for u in game.predecessors[v]
                                            if u != v and lab.masks[u] >> k & 1})

    def promise(state, v):
        if state == 0:
            return start[v]
        k, j = divmod(state - 1, P)
        if lab.masks[v] >> k & 1:
            return k
        owners = holder_owners[(k, v)]
        jj = j if j in owners else (owners[0] if owners else None)
        if jj is not None:
            ok = [c for c in labels(v) if ranks.rank[jj][c] <= ranks.rank[jj][k]]
            if ok:
                return best_for(jj, ok)
        return start[v]

    n_states = 1 + K * P
    update = np.zeros((n_states, game.n), dtype=np.int64)
    moves = np.zeros((n_states, game.n), dtype=np.int64)
    for s in range(n_states):
        for v in range(game.n):
            k = promise(s, v)
            update[s, v] = 1 + k * P + game.owner[v]
            moves[s, v] = forests[k][v]
    machines = []
    for i in range(P):
        mv = np.where(np.array(game.owner) == i, moves, -1)
        machines.append(MooreMachine(i, update, mv, 0))
    return minimize_profile(game, MooreProfile(tuple(machines)))


def compose_profiles(game: GameGraph, collapse: LeafCollapse, outer: MooreProfile) -> MooreProfile:
    """Run ``outer`` until a bottom component is entered, then its positional profile."""
    if collapse.identity:
        return outer
    machines = []
    for m in outer.machines:
        move = np.array(m.move)
        for v, w in collapse.inner.items():
            if game.owner[v] == m.player:
                move[:, v] = w
        machines.append(MooreMachine(m.player, m.update, move, m.initial))
    return minimize_profile(game, MooreProfile(tuple(machines)))


def simplify_to_positional(game: GameGraph, profile: MooreProfile, v0: int) -> MooreProfile:
    """Positional equivalent of ``profile`` from ``v0`` when one exists.

    If every reachable product state at a vertex prescribes the same move,
    the positional profile with those moves induces the same play in every
    subgame; otherwise ``profile`` is returned unchanged.
    """
    if profile.positional:
        return profile
    choice = {}
    for s in reachable_product_states(game, profile, v0):
        p = game.owner[s.vertex]
        w = profile.machines[p].next_move(s.memory[p], s.vertex)
        if choice.setdefault(s.vertex, w) != w:
            return profile
    return positional_profile(game, choice)


@dataclass
class Solution:
    profile: MooreProfile
    collapse: LeafCollapse
    labeling: Labeling | None
    trace: object


def solve(game: GameGraph, v0: int | None = None, check_invariants: bool = False,
          cycle_choice=None) -> Solution:
    """Full pipeline with intermediate results (see :func:`solve_weak_spe`)."""
    if v0 is None:
        v0 = game.initial if game.initial is not None else 0
    collapse = collapse_to_leafed(game, cycle_choice)
    if v0 in collapse.component_of and not collapse.identity:
        return Solution(positional_profile(game, collapse.inner), collapse, None, None)
    lab, trace = run_fixpoint(collapse.leafed, check_invariants=check_invariants)
    outer = weak_spe_from_labeling(collapse.leafed, lab, v0)
    profile = compose_profiles(game, collapse, outer)
    return Solution(simplify_to_positional(game, profile, v0), collapse, lab, trace)


def solve_weak_spe(game: GameGraph, v0: int | None = None, check_invariants: bool = False,
                   cycle_choice=None) -> MooreProfile:
    """Finite-memory weak SPE of ``(game, v0)``."""
    return solve(game, v0, check_invariants, cycle_choice).profile


# ---------------------------------------------------------------------------
# layered outcome sets


@dataclass(frozen=True)
class BadPattern:
    """``o < p < q`` for player ``i`` while ``q < o < p`` for player ``i2``."""

    i: int
    i2: int
    o: object
    p: object
    q: object


@dataclass(frozen=True)
class LayerPartition:
    blocks: tuple        # layers from least to most preferred
    orientation: tuple   # per block, per player: True if ordered like player 0

    def block_of(self, o) -> int:
        for b, block in enumerate(self.blocks):
            if o in block:
                return b
        raise KeyError(o)


def is_bad_pattern(prefs, i, i2, o, p, q) -> bool:
    """``o <_i p <_i q`` and ``q <_i2 o <_i2 p`` (linear extension for vectors)."""
    k, k2 = (lambda x: prefs.key(i, x)), (lambda x: prefs.key(i2, x))
    return k(o) < k(p) < k(q) and k2(q) < k2(o) < k2(p)


def all_bad_patterns(outcomes, prefs):
    """Every bad pattern, in lexicographic order of ``(i, i2, o, p, q)``.

    Outcomes are ordered as given.
    """
    outcomes = list(outcomes)
    for i in range(prefs.n_players):
        for i2 in range(prefs.n_players):
            if i2 == i:
                continue
            for o in outcomes:
                for p in outcomes:
                    for q in outcomes:
                        if is_bad_pattern(prefs, i, i2, o, p, q):
                            yield BadPattern(i, i2, o, p, q)


def check_layered(outcomes, prefs):
    """Layer partition of ``outcomes``, or the first bad pattern (see :func:`all_bad_patterns`)."""
    outcomes = list(outcomes)
    n_players = prefs.n_players
    for bad in all_bad_patterns(outcomes, prefs):
        return bad

    seq = sorted(outcomes, key=lambda x: prefs.key(0, x))
    cuts = [0]
    for t in range(1, len(seq)):
        if all(max(prefs.key(i, x) for x in seq[:t]) < min(prefs.key(i, x) for x in seq[t:])
               for i in range(n_players)):
            cuts.append(t)
    cuts.append(len(seq))
    fine = [seq[a:b] for a, b in zip(cuts, cuts[1:]) if b > a]

    def orientation(block):
        ref = sorted(block, key=lambda x: prefs.key(0, x))
        out = []
        for i in range(n_players):
            mine = sorted(block, key=lambda x: prefs.key(i, x))
            if mine == ref:
                out.append(True)
            elif mine == ref[::-1]:
                out.append(False)
            else:
                return None
        return tuple(out)

    blocks = []
    current = fine[-1] if fine else []
    for b in reversed(fine[:-1]):
        merged = b + current
        if orientation(merged) is not None:
            current = merged
        else:
            blocks.append(current)
            current = b
    if current:
        blocks.append(current)
    blocks.reverse()
    orient = tuple(orientation(b) for b in blocks)
    assert all(x is not None for x in orient), "layer without agree/reverse orders"
    return LayerPartition(tuple(tuple(b) for b in blocks), orient)


def uniform_weak_spe_layered(game: GameGraph, cycle_choice=None) -> MooreProfile:
    """Positional profile that is a weak SPE from every vertex (layered outcomes).

    Raises :class:`NotLayered` with the bad pattern otherwise.
    """
    dec = bottom_sccs(game)
    pick = cycle_choice or smallest_simple_cycle
    comps = []
    for comp in dec.bottom_components:
        cyc = pick(game, comp)
        comps.append((comp, cyc.cycle, outcome_of_lasso(game, cyc)))
    distinct = []
    for _, _, o in comps:
        if o not in distinct:
            distinct.append(o)
    layers = check_layered(distinct, game.prefs)
    if isinstance(layers, BadPattern):
        raise NotLayered(layers)
    choice = {}
    _solve_layers(game, set(range(game.n)), comps, layers, choice)
    return positional_profile(game, choice)


def _solve_layers(game, region, comps, layers, choice):
    top = max(layers.block_of(o) for _, _, o in comps)
    if all(layers.block_of(o) == top for _, _, o in comps):
        _one_layer(game, region, comps, layers.orientation[top], choice)
        return
    upper = [c for c in comps if layers.block_of(c[2]) == top]
    seeds = {v for comp, _, _ in upper for v in comp}
    upper_region = backward_reach_within(game, region, seeds)
    _one_layer(game, upper_region, upper, layers.orientation[top], choice)
    rest = [c for c in comps if layers.block_of(c[2]) != top]
    _solve_layers(game, region - upper_region, rest, layers, choice)


def _one_layer(game, region, comps, orientation, choice):
    outs = {o for _, _, o in comps}
    if len(outs) == 1:
        choice.update(_reach_choices(game, [cyc for _, cyc, _ in comps], within=region))
        return
    coalition = {i for i in range(game.n_players) if orientation[i]}
    best = max(outs, key=lambda o: game.prefs.key(0, o))
    upper = [c for c in comps if c[2] == best]
    lower = [c for c in comps if c[2] != best]
    lower_sets = {frozenset(comp) for comp, _, _ in lower}
    won = {v for comp, _, _ in upper for v in comp}
    while True:
        won = attractor(game, won, coalition, within=region)
        dec = bottom_sccs(game, within=region - won)
        extra = [d for d in dec.bottom_components if frozenset(d) not in lower_sets]
        if not extra:
            break
        for d in extra:
            won.update(d)
    choice.update(_reach_choices(game, [cyc for _, cyc, _ in upper], within=won))
    _one_layer(game, region - won, lower, orientation, choice)
