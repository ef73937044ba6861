"""Finite-memory strategies as Moore machines, and play simulation.

A machine for player ``i`` is ``(M, m0, update, move)``.  The move at the
current vertex ``v`` is ``move[m, v]`` where ``m`` is the memory reached
after reading the history *before* ``v``; on leaving ``v`` the memory
becomes ``update[m, v]``.  A machine in state 1 at ``v1`` that plays ``l1``
and goes to state 2 is therefore ``move[1, v1] = l1, update[1, v1] = 2``.

A *product state* ``(v, memories)`` stands for every history ending in
``v`` that drives the machines into ``memories``; since the profile's
behavior after such a history depends on nothing else, the finitely many
product states cover all subgames.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import InvalidProfile
from .game_model import GameGraph, Lasso


class ProductState(NamedTuple):
    vertex: int
    memory: tuple


@dataclass(frozen=True, eq=False)
class MooreMachine:
    """Deterministic Moore machine of one player.

    ``update`` and ``move`` are ``(n_states, n_vertices)`` integer arrays;
    ``move`` holds -1 at vertices the player does not own.
    """

    player: int
    update: np.ndarray
    move: np.ndarray
    initial: int = 0

    def __post_init__(self):
        update = np.array(self.update, dtype=np.int64)
        move = np.array(self.move, dtype=np.int64)
        if update.ndim != 2 or update.shape != move.shape:
            raise InvalidProfile("update and move tables must have equal 2-d shapes")
        if update.size and (update.min() < 0 or update.max() >= update.shape[0]):
            raise InvalidProfile("update table refers to unknown memory states")
        if not 0 <= self.initial < update.shape[0]:
            raise InvalidProfile("initial memory state out of range")
        update.setflags(write=False)
        move.setflags(write=False)
        object.__setattr__(self, "update", update)
        object.__setattr__(self, "move", move)
        object.__setattr__(self, "_upd", update.tolist())
        object.__setattr__(self, "_mov", move.tolist())

    @property
    def n_states(self) -> int:
        return self.update.shape[0]

    def next_move(self, m: int, v: int) -> int:
        return self._mov[m][v]

    def next_state(self, m: int, v: int) -> int:
        return self._upd[m][v]

    def check(self, game: GameGraph):
        if self.update.shape[1] != game.n:
            raise InvalidProfile(f"machine of player {self.player} has wrong vertex count")
        for v in range(game.n):
            owned = game.owner[v] == self.player
            for m in range(self.n_states):
                w = self._mov[m][v]
                if owned and w not in game.successors[v]:
                    raise InvalidProfile(
                        f"player {game.players[self.player]} moves {game.vertices[v]}->{w}, not an edge")
                if not owned and w != -1:
                    raise InvalidProfile(
                        f"player {game.players[self.player]} has a move at {game.vertices[v]} it does not own")

    def __eq__(self, other):
        return (isinstance(other, MooreMachine) and self.player == other.player
                and self.initial == other.initial
                and np.array_equal(self.update, other.update)
                and np.array_equal(self.move, other.move))

    def __hash__(self):
        return hash((self.player, self.initial, self.update.tobytes(), self.move.tobytes()))


@dataclass(frozen=True)
class MooreProfile:
    machines: tuple

    def __post_init__(self):
        object.__setattr__(self, "machines", tuple(self.machines))
        for i, m in enumerate(self.machines):
            if m.player != i:
                raise InvalidProfile(f"machine {i} belongs to player {m.player}")

    @property
    def memory_sizes(self) -> tuple:
        return tuple(m.n_states for m in self.machines)

    @property
    def positional(self) -> bool:
        return all(m.n_states == 1 for m in self.machines)

    @property
    def uniform(self) -> bool:
        # every machine here is total over all vertices
        return self.positional

    def check(self, game: GameGraph):
        if len(self.machines) != game.n_players:
            raise InvalidProfile(f"{len(self.machines)} machines for {game.n_players} players")
        for m in self.machines:
            m.check(game)

    def start(self, v: int) -> ProductState:
        return ProductState(v, tuple(m.initial for m in self.machines))

    def positional_move(self, v: int, owner: int) -> int:
        return self.machines[owner].next_move(0, v)

    def replace(self, player: int, machine: MooreMachine) -> "MooreProfile":
        ms = list(self.machines)
        ms[player] = machine
        return MooreProfile(tuple(ms))


def positional_machine(game: GameGraph, player: int, choice) -> MooreMachine:
    """One-state machine; ``choice`` maps owned vertices to targets.

    Owned vertices missing from ``choice`` play their smallest successor.
    """
    move = np.full((1, game.n), -1, dtype=np.int64)
    for v in range(game.n):
        if game.owner[v] == player:
            move[0, v] = choice.get(v, game.successors[v][0])
    return MooreMachine(player, np.zeros((1, game.n), dtype=np.int64), move)


def positional_profile(game: GameGraph, choice) -> MooreProfile:
    """Positional profile from a vertex -> successor map (missing: smallest successor)."""
    return MooreProfile(tuple(positional_machine(game, i, choice) for i in range(game.n_players)))


def step(game: GameGraph, profile: MooreProfile, s: ProductState) -> ProductState:
    v, mem = s
    p = game.owner[v]
    w = profile.machines[p].next_move(mem[p], v)
    return ProductState(w, tuple(m.next_state(x, v) for m, x in zip(profile.machines, mem)))


def deviation_successors(game: GameGraph, profile: MooreProfile, s: ProductState) -> list:
    """``((v, w), state)`` for every edge out of ``s.vertex``, prescribed one included."""
    v, mem = s
    nxt = tuple(m.next_state(x, v) for m, x in zip(profile.machines, mem))
    return [((v, w), ProductState(w, nxt)) for w in game.successors[v]]


def induced_lasso(game: GameGraph, profile: MooreProfile, start: ProductState) -> Lasso:
    """The play induced from ``start``, cut at the first repeated product state."""
    seen = {}
    states = []
    s = ProductState(start[0], tuple(start[1]))
    while s not in seen:
        seen[s] = len(states)
        states.append(s)
        s = step(game, profile, s)
    k = seen[s]
    verts = [x.vertex for x in states]
    return Lasso(tuple(verts[:k]), tuple(verts[k:]))


# ---------------------------------------------------------------------------
# memory reduction


def minimize_machine(game: GameGraph, machine: MooreMachine) -> MooreMachine:
    """Smallest machine with the same moves on every vertex sequence.

    Keeps the states reachable from the initial one under arbitrary vertex
    inputs and merges states by partition refinement on their moves.
    """
    owned = [v for v in range(game.n) if game.owner[v] == machine.player]
    reach = [machine.initial]
    index = {machine.initial: 0}
    for m in reach:
        for v in range(game.n):
            t = machine.next_state(m, v)
            if t not in index:
                index[t] = len(reach)
                reach.append(t)
    block = {}
    sig = {m: tuple(machine.next_move(m, v) for v in owned) for m in reach}
    ids = {}
    for m in reach:
        block[m] = ids.setdefault(sig[m], len(ids))
    while True:
        ids = {}
        new = {}
        for m in reach:
            key = (block[m],) + tuple(block[machine.next_state(m, v)] for v in range(game.n))
            new[m] = ids.setdefault(key, len(ids))
        if len(ids) == len(set(block.values())):
            block = new
            break
        block = new
    # renumber so that the initial state is 0 and numbering follows discovery order
    order = {}
    for m in reach:
        order.setdefault(block[m], len(order))
    n = len(order)
    update = np.zeros((n, game.n), dtype=np.int64)
    move = np.full((n, game.n), -1, dtype=np.int64)
    for m in reach:
        b = order[block[m]]
        for v in range(game.n):
            update[b, v] = order[block[machine.next_state(m, v)]]
            move[b, v] = machine.next_move(m, v)
    return MooreMachine(machine.player, update, move, 0)


def minimize_profile(game: GameGraph, profile: MooreProfile) -> MooreProfile:
    return MooreProfile(tuple(minimize_machine(game, m) for m in profile.machines))
