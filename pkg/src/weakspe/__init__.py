"""Weak subgame-perfect equilibria in games on graphs."""
from .errors import *  # noqa: F401,F403
from .game_model import (EdgeWeights, GameGraph, Lasso, LeafOutcomes, Parity, PreferenceTable,
                         build_game, outcome_of_lasso, payoff, prefers)
from .games import fig1, g_n
from .io import load_game, load_profile, parse_game, print_game, print_profile
from .fixpoint import Labeling, is_fixpoint, run_fixpoint
from .strategy import MooreMachine, MooreProfile, ProductState, induced_lasso, step
from .synthesis import (check_layered, collapse_to_leafed, solve_weak_spe,
                        uniform_weak_spe_layered, weak_spe_from_labeling)
from .verify import check_deviation_profitable, check_very_weak_spe

__version__ = "0.1.0"
