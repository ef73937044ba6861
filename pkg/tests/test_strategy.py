import numpy as np
import pytest
from conftest import random_weighted_game, rng_of, seeds
from hypothesis import given, settings

from weakspe.errors import InvalidProfile
from weakspe.game_model import Lasso
from weakspe.games import ring_profile
from weakspe.strategy import (
    MooreMachine,
    MooreProfile,
    ProductState,
    deviation_successors,
    induced_lasso,
    minimize_machine,
    positional_profile,
    step,
)


def test_ring_machine_moves(g4):
    prof = ring_profile(4)
    m1 = prof.machines[0]
    # states are numbered from 0
    assert (m1.next_move(0, 0), m1.next_state(0, 0)) == (4, 1)
    assert (m1.next_move(1, 0), m1.next_state(1, 0)) == (1, 2)
    assert (m1.next_move(2, 0), m1.next_state(2, 0)) == (1, 0)
    s = step(g4, prof, ProductState(0, (0, 1, 2, 0)))
    assert s == ProductState(4, (1, 1, 2, 0))


def test_ring_profile_plays(g4):
    prof = ring_profile(4)
    assert induced_lasso(g4, prof, prof.start(0)) == Lasso((0,), (4,))
    # subgame after history v1, now at v2: p1 has read v1
    after_v1 = ProductState(1, (1, 1, 2, 0))
    assert induced_lasso(g4, prof, after_v1) == Lasso((1, 2, 3), (7,))


def test_positional_memory_constant(g4):
    prof = positional_profile(g4, {0: 1, 1: 2, 2: 3, 3: 0})
    s = prof.start(0)
    for _ in range(6):
        s = step(g4, prof, s)
        assert s.memory == (0, 0, 0, 0)
    assert induced_lasso(g4, prof, prof.start(2)).cycle == (2, 3, 0, 1)


def test_self_loop_game():
    from weakspe.game_model import GameGraph, LeafOutcomes, PreferenceTable

    g = GameGraph(("p",), ("x",), (0,), ((0,),), LeafOutcomes({0: "o"}),
                  PreferenceTable.symbolic(("o",), [("o",)]))
    prof = positional_profile(g, {})
    assert induced_lasso(g, prof, prof.start(0)) == Lasso((), (0,))


def test_deviation_successors(g4):
    prof = ring_profile(4)
    succ = deviation_successors(g4, prof, prof.start(0))
    assert [e for e, _ in succ] == [(0, 1), (0, 4)]
    assert step(g4, prof, prof.start(0)) in [t for _, t in succ]
    leaf = deviation_successors(g4, prof, prof.start(5))
    assert len(leaf) == 1 and leaf[0][0] == (5, 5)


def test_machine_validation(g4):
    with pytest.raises(InvalidProfile):
        MooreMachine(0, np.zeros((1, 8)), np.zeros((2, 8)))
    with pytest.raises(InvalidProfile):
        MooreMachine(0, np.full((1, 8), 3), np.zeros((1, 8)))
    bad = MooreMachine(0, np.zeros((1, 8), dtype=int), np.full((1, 8), -1))
    with pytest.raises(InvalidProfile):
        bad.check(g4)  # no move at v1
    with pytest.raises(InvalidProfile):
        MooreProfile((bad,)).replace(0, MooreMachine(1, bad.update, bad.move))


def test_minimize_keeps_ring_machine_size(g4):
    for m in ring_profile(4).machines:
        assert minimize_machine(g4, m).n_states == 3


@settings(max_examples=100, deadline=None)
@given(seeds)
def test_lasso_consistency(seed):
    rng = rng_of(seed)
    g = random_weighted_game(rng)
    k = 3
    machines = []
    for i in range(g.n_players):
        update = np.array([[rng.randrange(k) for _ in range(g.n)] for _ in range(k)])
        move = np.array([[rng.choice(g.successors[v]) if g.owner[v] == i else -1
                          for v in range(g.n)] for _ in range(k)])
        machines.append(MooreMachine(i, update, move))
    prof = MooreProfile(tuple(machines))
    start = prof.start(rng.randrange(g.n))
    lasso = induced_lasso(g, prof, start)
    # the play from any later state on the path is a suffix of the same play
    s = start
    for offset in range(4):
        assert induced_lasso(g, prof, s).vertices(10) == lasso.vertices(offset + 10)[offset:]
        s = step(g, prof, s)
    # minimization preserves the induced play
    small = MooreProfile(tuple(minimize_machine(g, m) for m in machines))
    v0 = start.vertex
    assert induced_lasso(g, small, small.start(v0)).vertices(30) == lasso.vertices(30)
