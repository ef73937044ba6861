import numpy as np
import pytest
from conftest import random_weighted_game, rng_of, seeds
from hypothesis import given, settings

from weakspe.errors import NotATree, TooManyProfiles
from weakspe.game_model import GameGraph, LeafOutcomes, PreferenceTable
from weakspe.games import fig1_thick_profile, g_n, random_tree_game, ring_profile
from weakspe.strategy import MooreMachine, positional_machine, positional_profile, step
from weakspe.synthesis import solve_weak_spe
from weakspe.verify import (
    backward_induction_tree,
    check_deviation_profitable,
    check_very_weak_spe,
    continuation_outcomes,
    deviation_successors,
    enumerate_positional_profiles,
    reachable_product_states,
)


def always(game, player, target_of):
    return positional_machine(game, player, target_of)


def test_fig1_thick_profile_is_weak_spe(f1):
    assert check_very_weak_spe(f1, fig1_thick_profile(f1), 0).ok


def test_fig1_infinite_deviation_of_player2(f1):
    prof = fig1_thick_profile(f1)
    assert check_deviation_profitable(f1, prof, 1, always(f1, 1, {1: 0}), 0)


def test_fig1_deviation_of_player1_not_profitable(f1):
    prof = fig1_thick_profile(f1)
    assert not check_deviation_profitable(f1, prof, 0, always(f1, 0, {0: 2}), 0)
    assert not check_deviation_profitable(f1, prof, 1, prof.machines[1], 0)


def test_fig1_all_v2_profile_fails(f1):
    verdict = check_very_weak_spe(f1, positional_profile(f1, {0: 2, 1: 0}), 0)
    assert not verdict.ok
    assert f1.prefs.prefers(verdict.owner, verdict.outcome_before, verdict.outcome_after)


def test_ring_profile_certified(g4):
    assert check_very_weak_spe(g4, ring_profile(4), 0).ok


@pytest.mark.parametrize("n", [4, 5])
def test_no_positional_weak_spe_in_ring(n):
    g = g_n(n)
    profiles = list(enumerate_positional_profiles(g))
    assert len(profiles) == 2 ** n
    for prof in profiles:
        v = check_very_weak_spe(g, prof, 0)
        assert not v.ok and g.prefs.prefers(v.owner, v.outcome_before, v.outcome_after)


def test_enumeration_counts(g4):
    one = GameGraph(("p",), ("a", "b", "c"), (0, 0, 0), ((1,), (2,), (2,)),
                    LeafOutcomes({2: "o"}), PreferenceTable.symbolic(("o",), [("o",)]))
    assert len(list(enumerate_positional_profiles(one))) == 1
    with pytest.raises(TooManyProfiles):
        list(enumerate_positional_profiles(g4, bound=10))


def test_reachable_states_of_positional_profile(g4):
    prof = positional_profile(g4, {})
    assert len(reachable_product_states(g4, prof, 0)) <= g4.n


def test_reachable_states_bounded_and_closed(g4):
    prof = solve_weak_spe(g4)
    states = reachable_product_states(g4, prof, 0)
    assert len(states) <= g4.n * 5 ** 4
    for s in states:
        for _, t in deviation_successors(g4, prof, s):
            assert t in states


@settings(max_examples=100, deadline=None)
@given(seeds)
def test_checker_matches_definition(seed):
    """Independent re-check: simulate every one-shot deviation step by step."""
    rng = rng_of(seed)
    g = random_weighted_game(rng, max_vertices=6)
    k = 2
    machines = []
    for i in range(g.n_players):
        update = np.array([[rng.randrange(k) for _ in range(g.n)] for _ in range(k)])
        move = np.array([[rng.choice(g.successors[v]) if g.owner[v] == i else -1
                          for v in range(g.n)] for _ in range(k)])
        machines.append(MooreMachine(i, update, move))
    from weakspe.strategy import MooreProfile, induced_lasso
    from weakspe.game_model import outcome_of_lasso

    prof = MooreProfile(tuple(machines))
    states = reachable_product_states(g, prof, 0)
    profitable = False
    for s in states:
        here = outcome_of_lasso(g, induced_lasso(g, prof, s))
        for _, t in deviation_successors(g, prof, s):
            there = outcome_of_lasso(g, induced_lasso(g, prof, t))
            profitable |= g.prefs.prefers(g.owner[s.vertex], here, there)
    assert check_very_weak_spe(g, prof, 0).ok == (not profitable)
    values = continuation_outcomes(g, prof, states)
    for s in states:
        assert values[s] == values[step(g, prof, s)]


@settings(max_examples=100, deadline=None)
@given(seeds)
def test_flipping_a_move_is_decided(seed):
    rng = rng_of(seed)
    g = random_weighted_game(rng)
    prof = solve_weak_spe(g, 0)
    assert check_very_weak_spe(g, prof, 0).ok
    v = rng.randrange(g.n)
    p = g.owner[v]
    m = prof.machines[p]
    move = np.array(m.move)
    move[:, v] = rng.choice(g.successors[v])
    flipped = prof.replace(p, MooreMachine(p, m.update, move, m.initial))
    verdict = check_very_weak_spe(g, flipped, 0)
    assert verdict.ok or g.prefs.prefers(verdict.owner, verdict.outcome_before, verdict.outcome_after)


def test_backward_induction_depth_one():
    prefs = PreferenceTable.symbolic(("a", "b"), [("a", "b")])
    g = GameGraph(("p",), ("r", "la", "lb"), (0, 0, 0), ((1, 2), (1,), (2,)),
                  LeafOutcomes({1: "a", 2: "b"}), prefs)
    prof = backward_induction_tree(g, 0, 1)
    assert prof.positional_move(0, 0) == 2


def test_backward_induction_rejects_dag_and_depth(g4, f1):
    with pytest.raises(NotATree):
        backward_induction_tree(g4, 0, 10)
    diamond = GameGraph(("p",), ("r", "a", "b", "l"), (0,) * 4, ((1, 2), (3,), (3,), (3,)),
                        LeafOutcomes({3: "o"}), PreferenceTable.symbolic(("o",), [("o",)]))
    with pytest.raises(NotATree):
        backward_induction_tree(diamond, 0, 5)
    chain = GameGraph(("p",), ("r", "a", "l"), (0,) * 3, ((1,), (2,), (2,)),
                      LeafOutcomes({2: "o"}), PreferenceTable.symbolic(("o",), [("o",)]))
    with pytest.raises(NotATree):
        backward_induction_tree(chain, 0, 1)
    assert backward_induction_tree(chain, 0, 2).positional


@settings(max_examples=100, deadline=None)
@given(seeds)
def test_backward_induction_certified(seed):
    g, depth = random_tree_game(rng_of(seed))
    assert check_very_weak_spe(g, backward_induction_tree(g, 0, depth), 0).ok


def test_verdict_describe(f1):
    v = check_very_weak_spe(f1, positional_profile(f1, {0: 2, 1: 0}), 0)
    text = v.describe(f1)
    assert text.startswith("counterexample: at ") and "deviates" in text
