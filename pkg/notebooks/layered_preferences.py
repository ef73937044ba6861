"""Layered preferences give uniform positional weak SPEs.

Run with ``python3 notebooks/layered_preferences.py``.
"""
import random

from weakspe.game_model import PreferenceTable
from weakspe.games import g_n, random_shared_order_game
from weakspe.synthesis import check_layered, uniform_weak_spe_layered
from weakspe.verify import check_from_every_vertex

outs = ("a", "b", "c", "d")
# two layers; inside the upper one the second player has the reverse order
prefs = PreferenceTable.symbolic(outs, [("a", "b", "c", "d"), ("a", "b", "d", "c")])
print(check_layered(outs, prefs))

ring = g_n(4)
print("ring game:", check_layered([f"o{j}" for j in range(1, 5)], ring.prefs))

# shared orders are one layer with every player in the same orientation
rng = random.Random(3)
bad = 0
for _ in range(100):
    game = random_shared_order_game(rng, forward_bias=0.5, sink_rate=0.3)
    prof = uniform_weak_spe_layered(game)
    bad += not all(check_from_every_vertex(game, prof).values())
print(f"100 shared-order games, uniform profile refuted from some vertex: {bad}")
