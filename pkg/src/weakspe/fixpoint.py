"""Remove/Adjust labeling of leafed games.

Every vertex carries the set of leaf outcomes that may still be the outcome
of an equilibrium play from it.  *Remove* drops an outcome at a vertex whose
owner can escape to a successor all of whose labels it strictly prefers;
*Adjust* then drops that outcome wherever no path labeled with it reaches a
matching leaf anymore.  The two alternate until Remove has nothing to do.

Label sets are stored as bit masks over the ordered leaf-outcome list.
"""
from __future__ import annotations

import heapq
from dataclasses import dataclass, field

from .errors import GameValidationError, InvariantViolation, UnreachableLeaf
from .game_model import SYMBOLIC, GameGraph, format_outcome
from .graph_analysis import backward_reach_within


class _Top:
    """Greatest element, above every outcome for every player."""

    def __repr__(self):
        return "TOP"


TOP = _Top()


def leaf_outcomes(game: GameGraph) -> tuple:
    """The leaf outcome set, in declaration order (symbolic) or sorted (vectors)."""
    if not game.is_leafed:
        raise GameValidationError("the fixpoint needs a game with leaf outcomes")
    present = set(game.spec.outcomes.values())
    if game.prefs.kind == SYMBOLIC:
        return tuple(o for o in game.prefs.outcomes if o in present)
    return tuple(sorted(present))


@dataclass
class Labeling:
    """Per-vertex subsets of the leaf outcomes, as bit masks over ``outcomes``."""

    outcomes: tuple
    masks: list
    step: int = 0

    def copy(self) -> "Labeling":
        return Labeling(self.outcomes, list(self.masks), self.step)

    def labels(self, v: int) -> list:
        m = self.masks[v]
        return [o for k, o in enumerate(self.outcomes) if m >> k & 1]

    def contains(self, v: int, o) -> bool:
        return bool(self.masks[v] >> self.outcomes.index(o) & 1)

    def as_sets(self) -> list:
        return [frozenset(self.labels(v)) for v in range(len(self.masks))]

    def format(self, v: int) -> str:
        return "{" + ",".join(format_outcome(o) for o in self.labels(v)) + "}"

    def __eq__(self, other):
        return isinstance(other, Labeling) and self.outcomes == other.outcomes \
            and self.masks == other.masks


@dataclass(frozen=True)
class Remove:
    vertex: int
    outcome: object


@dataclass(frozen=True)
class AdjustRemoved:
    pairs: frozenset   # of (vertex, outcome)


@dataclass(frozen=True)
class Converged:
    step: int


@dataclass
class FixpointTrace:
    events: list = field(default_factory=list)

    @property
    def steps(self) -> int:
        return sum(1 for e in self.events if not isinstance(e, Converged))

    @property
    def removals(self) -> int:
        return sum(1 for e in self.events if isinstance(e, Remove))


class _Ranks:
    """Position of each leaf outcome in each player's linear order."""

    def __init__(self, game: GameGraph, outcomes: tuple):
        self.rank = []
        self.by_rank = []
        for i in range(game.n_players):
            order = sorted(range(len(outcomes)), key=lambda k: game.prefs.key(i, outcomes[k]))
            r = [0] * len(outcomes)
            for pos, k in enumerate(order):
                r[k] = pos
            self.rank.append(r)
            self.by_rank.append(order)

    def min_index(self, player: int, mask: int):
        for k in self.by_rank[player]:
            if mask >> k & 1:
                return k
        return None


def _leaf_targets(game: GameGraph, outcomes: tuple) -> list:
    targets = [set() for _ in outcomes]
    pos = {o: k for k, o in enumerate(outcomes)}
    for leaf, o in game.spec.outcomes.items():
        targets[pos[o]].add(leaf)
    return targets


def initial_labeling(game: GameGraph) -> Labeling:
    """Each vertex labeled by the outcomes of the leaves it can reach."""
    outcomes = leaf_outcomes(game)
    if not game.leaves:
        raise GameValidationError("game has no leaves")
    masks = [0] * game.n
    everything = range(game.n)
    for k, targets in enumerate(_leaf_targets(game, outcomes)):
        for v in backward_reach_within(game, everything, targets):
            masks[v] |= 1 << k
    for v in range(game.n):
        if not masks[v]:
            raise UnreachableLeaf(v, game.vertices[v])
    return Labeling(outcomes, masks, 0)


def _m_index(lab: Labeling, game: GameGraph, ranks: _Ranks, v: int):
    """Rank (for the owner of ``v``) of m(v); None stands for TOP."""
    p = game.owner[v]
    best = None
    for w in game.succ(v):
        k = ranks.min_index(p, lab.masks[w])
        if k is not None and (best is None or ranks.rank[p][k] > best):
            best = ranks.rank[p][k]
    return best


def m_value(labeling: Labeling, game: GameGraph, v: int):
    """max over successors v' != v of the owner-minimal label of v'; TOP if none."""
    ranks = _Ranks(game, labeling.outcomes)
    r = _m_index(labeling, game, ranks, v)
    if r is None:
        return TOP
    return labeling.outcomes[ranks.by_rank[game.owner[v]][r]]


def _removable(lab: Labeling, game: GameGraph, ranks: _Ranks, v: int):
    """Owner-minimal outcome index removable at ``v``, or None."""
    m = _m_index(lab, game, ranks, v)
    if m is None:
        return None
    p = game.owner[v]
    k = ranks.min_index(p, lab.masks[v])
    if k is not None and ranks.rank[p][k] < m:
        return k
    return None


def remove_step(labeling: Labeling, game: GameGraph, order: str = "ascending"):
    """Apply one Remove in place; returns ``(v, outcome)`` or None."""
    ranks = _Ranks(game, labeling.outcomes)
    verts = range(game.n) if order == "ascending" else range(game.n - 1, -1, -1)
    for v in verts:
        k = _removable(labeling, game, ranks, v)
        if k is not None:
            labeling.masks[v] &= ~(1 << k)
            labeling.step += 1
            return v, labeling.outcomes[k]
    return None


def _adjust(lab: Labeling, game: GameGraph, k: int, targets: set) -> set:
    bit = 1 << k
    holders = [w for w in range(game.n) if lab.masks[w] & bit]
    alive = backward_reach_within(game, holders, targets)
    dead = set(holders) - alive
    for u in dead:
        lab.masks[u] &= ~bit
    return dead


def adjust_step(labeling: Labeling, game: GameGraph, removed) -> set:
    """Apply the Adjust following Remove of ``removed = (v, o)``, in place.

    Returns the deleted ``(u, o)`` pairs.
    """
    _, o = removed
    k = labeling.outcomes.index(o)
    targets = _leaf_targets(game, labeling.outcomes)[k]
    dead = _adjust(labeling, game, k, targets)
    labeling.step += 1
    return {(u, o) for u in dead}


# ---------------------------------------------------------------------------
# invariants


def invariant_violations(lab: Labeling, game: GameGraph) -> list:
    """Names (with a witness) of the invariants INV1-INV3 that fail on ``lab``."""
    ranks = _Ranks(game, lab.outcomes)
    bad = []
    for v in range(game.n):
        m = _m_index(lab, game, ranks, v)
        if m is None:
            continue
        p = game.owner[v]
        upper = 0
        for k in range(len(lab.outcomes)):
            if ranks.rank[p][k] >= m:
                upper |= 1 << k
        for w in game.succ(v):
            if lab.masks[w] & upper & ~lab.masks[v]:
                bad.append(("INV1", f"vertex {game.vertices[v]}, successor {game.vertices[w]}"))
                break
    for v in range(game.n):
        if not lab.masks[v]:
            bad.append(("INV2", f"vertex {game.vertices[v]}"))
    for v in range(game.n):
        mv = lab.masks[v]
        allowed = [u for u in range(game.n) if lab.masks[u] & ~mv == 0]
        if v not in backward_reach_within(game, allowed, game.leaves):
            bad.append(("INV3", f"vertex {game.vertices[v]}"))
    return bad


def is_fixpoint(labeling: Labeling, game: GameGraph) -> bool:
    ranks = _Ranks(game, labeling.outcomes)
    if any(_removable(labeling, game, ranks, v) is not None for v in range(game.n)):
        return False
    for k, targets in enumerate(_leaf_targets(game, labeling.outcomes)):
        holders = [w for w in range(game.n) if labeling.masks[w] >> k & 1]
        if len(backward_reach_within(game, holders, targets)) != len(holders):
            return False
    return True


# ---------------------------------------------------------------------------
# driver


def run_fixpoint(game: GameGraph, check_invariants: bool = False, order: str = "ascending"):
    """Alternate Remove and Adjust until Remove applies nowhere.

    ``order`` selects which removable vertex goes first: smallest index
    (``"ascending"``) or largest (``"descending"``).  Returns the final
    labeling and the trace of events.
    """
    lab = initial_labeling(game)
    ranks = _Ranks(game, lab.outcomes)
    targets = _leaf_targets(game, lab.outcomes)
    trace = FixpointTrace()
    sign = 1 if order == "ascending" else -1
    if check_invariants:
        _assert_invariants(lab, game, 0)

    cache = {}
    heap = []

    def refresh(v):
        k = _removable(lab, game, ranks, v)
        cache[v] = k
        if k is not None:
            heapq.heappush(heap, sign * v)

    for v in range(game.n):
        refresh(v)

    while True:
        v = None
        while heap:
            cand = sign * heapq.heappop(heap)
            if cache.get(cand) is not None:
                v = cand
                break
        if v is None:
            break
        k = cache[v]
        lab.masks[v] &= ~(1 << k)
        lab.step += 1
        trace.events.append(Remove(v, lab.outcomes[k]))
        if check_invariants:
            _assert_invariants(lab, game, lab.step)
        dead = _adjust(lab, game, k, targets[k])
        lab.step += 1
        trace.events.append(AdjustRemoved(frozenset((u, lab.outcomes[k]) for u in dead)))
        if check_invariants:
            _assert_invariants(lab, game, lab.step)
        touched = {v} | dead
        stale = set(touched)
        for u in touched:
            stale.update(game.predecessors[u])
        for u in stale:
            refresh(u)
    trace.events.append(Converged(lab.step))
    return lab, trace


def _assert_invariants(lab, game, step):
    bad = invariant_violations(lab, game)
    if bad:
        which, detail = bad[0]
        raise InvariantViolation(step, which, detail)


def replay(game: GameGraph, trace: FixpointTrace) -> list:
    """Labelings after each step 0, 1, ..., as recorded in ``trace``."""
    lab = initial_labeling(game)
    out = [lab.copy()]
    for e in trace.events:
        if isinstance(e, Remove):
            lab.masks[e.vertex] &= ~(1 << lab.outcomes.index(e.outcome))
        elif isinstance(e, AdjustRemoved):
            for u, o in e.pairs:
                lab.masks[u] &= ~(1 << lab.outcomes.index(o))
        else:
            continue
        lab.step += 1
        out.append(lab.copy())
    return out
