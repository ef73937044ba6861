"""Certification of strategy profiles and brute-force oracles.

A finite-memory profile is a weak SPE iff no player has a profitable
one-shot deviation in any subgame.  Subgames are represented by the product
states reachable from the start under *arbitrary* moves, so the check is a
finite enumeration.
"""
from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from math import prod

from .errors import NotATree, TooManyProfiles
from .game_model import GameGraph, Lasso, format_outcome, outcome_of_lasso
from .strategy import (
    MooreMachine,
    MooreProfile,
    ProductState,
    deviation_successors,
    induced_lasso,
    positional_profile,
    step,
)


@dataclass(frozen=True)
class Verdict:
    ok: bool
    state: ProductState | None = None
    edge: tuple | None = None
    owner: int | None = None
    outcome_before: object = None
    outcome_after: object = None

    def __bool__(self):
        return self.ok

    def describe(self, game: GameGraph) -> str:
        if self.ok:
            return "OK: no profitable one-shot deviation"
        v, w = self.edge
        return (f"counterexample: at {game.vertices[self.state.vertex]} "
                f"(memory {list(self.state.memory)}) player {game.players[self.owner]} "
                f"deviates {game.vertices[v]}->{game.vertices[w]}: "
                f"{format_outcome(self.outcome_before)} -> {format_outcome(self.outcome_after)}")


OK = Verdict(True)


def reachable_product_states(game: GameGraph, profile: MooreProfile, v0: int) -> set:
    """Closure of the start state under every edge, memories updated."""
    start = profile.start(v0)
    seen = {start}
    queue = deque([start])
    while queue:
        s = queue.popleft()
        for _, t in deviation_successors(game, profile, s):
            if t not in seen:
                seen.add(t)
                queue.append(t)
    return seen


def continuation_outcomes(game: GameGraph, profile: MooreProfile, states) -> dict:
    """Outcome of the play the profile induces from each state in ``states``.

    ``states`` must be closed under prescribed steps.  Each state's play runs
    into a cycle of the step map; its outcome is that cycle's outcome.
    """
    out = {}
    for s0 in states:
        if s0 in out:
            continue
        path = []
        pos = {}
        s = s0
        while s not in out and s not in pos:
            pos[s] = len(path)
            path.append(s)
            s = step(game, profile, s)
        if s in out:
            o = out[s]
        else:
            cyc = tuple(x.vertex for x in path[pos[s]:])
            o = outcome_of_lasso(game, Lasso((), cyc))
        for x in path:
            out[x] = o
    return out


def check_very_weak_spe(game: GameGraph, profile: MooreProfile, v0: int) -> Verdict:
    """Search every reachable subgame for a profitable one-shot deviation.

    Returns the first counterexample in (vertex, memory, edge) order, or OK.
    """
    profile.check(game)
    states = reachable_product_states(game, profile, v0)
    value = continuation_outcomes(game, profile, states)
    prefs = game.prefs
    for s in sorted(states):
        v = s.vertex
        p = game.owner[v]
        here = value[s]
        for edge, t in deviation_successors(game, profile, s):
            there = value[t]
            if prefs.prefers(p, here, there):
                return Verdict(False, s, edge, p, here, there)
    return OK


def check_from_every_vertex(game: GameGraph, profile: MooreProfile) -> dict:
    """Verdict per start vertex; used for uniform profiles."""
    return {v: check_very_weak_spe(game, profile, v) for v in range(game.n)}


def check_deviation_profitable(game: GameGraph, profile: MooreProfile, deviator: int,
                               machine: MooreMachine, v0: int) -> bool:
    """Does ``deviator`` gain by switching to ``machine`` from ``v0``?"""
    before = outcome_of_lasso(game, induced_lasso(game, profile, profile.start(v0)))
    other = profile.replace(deviator, machine)
    after = outcome_of_lasso(game, induced_lasso(game, other, other.start(v0)))
    return game.prefs.prefers(deviator, before, after)


def enumerate_positional_profiles(game: GameGraph, bound: int = 10**6):
    """Every positional profile once, varying the last vertex fastest."""
    total = prod(len(s) for s in game.successors)
    if total > bound:
        raise TooManyProfiles(f"{total} positional profiles exceed the bound {bound}")
    for combo in itertools.product(*game.successors):
        yield positional_profile(game, dict(enumerate(combo)))


def _tree_shape(game: GameGraph, v0: int, depth: int) -> list:
    """Vertices reachable from ``v0`` in breadth-first order; raises if not a tree."""
    parent = {v0: None}
    level = {v0: 0}
    order = [v0]
    for v in order:
        if v in game.leaves:
            continue
        if v in game.successors[v]:
            raise NotATree(f"non-leaf self-loop at {game.vertices[v]}")
        for w in game.successors[v]:
            if w in parent:
                raise NotATree(f"{game.vertices[w]} is reached along two paths")
            parent[w] = v
            level[w] = level[v] + 1
            if level[w] > depth:
                raise NotATree(f"depth exceeds {depth} at {game.vertices[w]}")
            order.append(w)
    return order


def backward_induction_tree(game: GameGraph, v0: int, depth: int) -> MooreProfile:
    """Kuhn-style backward induction on a finite tree rooted at ``v0``.

    Ties go to the smallest successor index.
    """
    order = _tree_shape(game, v0, depth)
    value = {}
    choice = {}
    for v in reversed(order):
        if v in game.leaves:
            value[v] = outcome_of_lasso(game, Lasso((), (v,)))
            continue
        p = game.owner[v]
        best = None
        for w in game.successors[v]:
            if best is None or game.prefs.prefers(p, value[best], value[w]):
                best = w
        choice[v] = best
        value[v] = value[best]
    return positional_profile(game, choice)
