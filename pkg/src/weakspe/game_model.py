"""Games on finite graphs, outcomes, preferences and lasso-shaped plays.

Outcomes come in two kinds.  A *symbolic* outcome is a plain string; every
player ranks the symbolic outcomes by an explicit strict total order.  A
*payoff vector* is a tuple of :class:`fractions.Fraction`, one component per
player, and player ``i`` compares two vectors by their ``i``-th component.
Parity objectives are mapped to 0/1 payoff vectors (1 = the player wins).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence, Union

from .errors import (
    DanglingEdge,
    GameValidationError,
    KindMismatch,
    LeafWithExtraEdge,
    MissingLeafOutcome,
    NonPermutationPreference,
    SinkVertex,
    UndefinedOutcome,
)

Outcome = Union[str, tuple]

SYMBOLIC = "symbolic"
VECTOR = "vector"


def outcome_kind(o) -> str:
    if isinstance(o, str):
        return SYMBOLIC
    if isinstance(o, tuple):
        return VECTOR
    raise TypeError(f"not an outcome: {o!r}")


def payoff(*values) -> tuple:
    """Build a payoff-vector outcome from ints, strings like ``'1/3'`` or Fractions."""
    return tuple(Fraction(x) for x in values)


def format_outcome(o) -> str:
    if isinstance(o, str):
        return o
    return "(" + ",".join(str(x) for x in o) + ")"


# ---------------------------------------------------------------------------
# preferences


@dataclass(frozen=True)
class PreferenceTable:
    """Per-player strict preferences.

    For the symbolic kind, ``orders[i]`` lists every outcome from least to
    most preferred by player ``i``.  For the vector kind the comparison is
    fixed (``<`` on the player's own component) and ``orders`` is empty.
    """

    n_players: int
    kind: str = VECTOR
    outcomes: tuple = ()
    orders: tuple = ()
    _rank: tuple = field(default=(), init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.kind == SYMBOLIC:
            if len(self.orders) != self.n_players:
                raise NonPermutationPreference(
                    f"{len(self.orders)} preference orders for {self.n_players} players")
            universe = set(self.outcomes)
            if len(universe) != len(self.outcomes):
                raise NonPermutationPreference("duplicate outcome identifiers")
            ranks = []
            for i, order in enumerate(self.orders):
                if len(order) != len(self.outcomes) or set(order) != universe:
                    raise NonPermutationPreference(
                        f"order of player {i} is not a permutation of the outcomes")
                ranks.append({o: r for r, o in enumerate(order)})
            object.__setattr__(self, "_rank", tuple(ranks))
        elif self.kind != VECTOR:
            raise ValueError(f"unknown preference kind {self.kind!r}")

    @classmethod
    def symbolic(cls, outcomes: Sequence[str], orders: Sequence[Sequence[str]]):
        return cls(len(orders), SYMBOLIC, tuple(outcomes), tuple(tuple(o) for o in orders))

    @classmethod
    def vector(cls, n_players: int):
        return cls(n_players, VECTOR)

    def rank(self, i: int, o) -> int:
        return self._rank[i][o]

    def check(self, o):
        kind = outcome_kind(o)
        if kind != self.kind:
            raise KindMismatch(f"{kind} outcome {format_outcome(o)} under {self.kind} preferences")
        if kind == SYMBOLIC and o not in self._rank[0]:
            raise KeyError(f"unknown outcome {o!r}")
        if kind == VECTOR and len(o) != self.n_players:
            raise KindMismatch(f"payoff vector of length {len(o)} for {self.n_players} players")

    def prefers(self, i: int, a, b) -> bool:
        """True iff player ``i`` strictly prefers ``b`` to ``a`` (``a`` below ``b``)."""
        if outcome_kind(a) != outcome_kind(b):
            raise KindMismatch(f"cannot compare {format_outcome(a)} with {format_outcome(b)}")
        self.check(a)
        self.check(b)
        if self.kind == SYMBOLIC:
            return self._rank[i][a] < self._rank[i][b]
        return a[i] < b[i]

    def key(self, i: int, o):
        """Sort key of a fixed linear extension of player ``i``'s preference.

        Identical to the preference itself for symbolic outcomes.  Payoff
        vectors with equal ``i``-th components are tie-broken
        lexicographically on the whole vector.
        """
        if self.kind == SYMBOLIC:
            return self._rank[i][o]
        return (o[i], o)


def prefers(prefs: PreferenceTable, i: int, a, b) -> bool:
    return prefs.prefers(i, a, b)


# ---------------------------------------------------------------------------
# outcome specifications


@dataclass(frozen=True)
class LeafOutcomes:
    """Outcome of a play is the outcome of the leaf it ends in."""

    outcomes: Mapping[int, Outcome]


@dataclass(frozen=True)
class EdgeWeights:
    """Per-player rational edge weights with a prefix-independent aggregator."""

    weights: Mapping[tuple, tuple]
    aggregator: str = "mean-payoff"

    def __post_init__(self):
        if self.aggregator not in ("mean-payoff", "limsup"):
            raise ValueError(f"unknown aggregator {self.aggregator!r}")


@dataclass(frozen=True)
class Parity:
    """Per-player vertex priorities.

    By default a player wins a play when the minimal priority seen infinitely
    often is even; ``extremum`` and ``winning`` select the other conventions.
    """

    priorities: tuple
    extremum: str = "min"
    winning: str = "even"

    def __post_init__(self):
        if self.extremum not in ("min", "max") or self.winning not in ("even", "odd"):
            raise ValueError(f"bad parity convention {self.extremum}-{self.winning}")


# ---------------------------------------------------------------------------
# plays


def primitive_root(seq: tuple) -> tuple:
    n = len(seq)
    for p in range(1, n + 1):
        if n % p == 0 and seq[:p] * (n // p) == seq:
            return seq[:p]
    return seq


def canonical_rotation(cycle: tuple) -> tuple:
    return min(cycle[k:] + cycle[:k] for k in range(len(cycle)))


@dataclass(frozen=True)
class Lasso:
    """Eventually periodic play ``prefix · cycle^ω``."""

    prefix: tuple
    cycle: tuple

    def __post_init__(self):
        object.__setattr__(self, "prefix", tuple(self.prefix))
        object.__setattr__(self, "cycle", tuple(self.cycle))
        if not self.cycle:
            raise ValueError("lasso cycle must be nonempty")

    def normalized(self) -> "Lasso":
        """Shortest prefix and primitive cycle describing the same play."""
        prefix = list(self.prefix)
        cycle = primitive_root(self.cycle)
        while prefix and prefix[-1] == cycle[-1]:
            prefix.pop()
            cycle = cycle[-1:] + cycle[:-1]
        return Lasso(tuple(prefix), cycle)

    def vertices(self, length: int) -> list:
        """First ``length`` vertices of the play."""
        out = list(self.prefix[:length])
        k = 0
        while len(out) < length:
            out.append(self.cycle[k % len(self.cycle)])
            k += 1
        return out

    def __str__(self):
        return " ".join(map(str, self.prefix)) + (" " if self.prefix else "") + \
            "(" + " ".join(map(str, self.cycle)) + ")^w"


# ---------------------------------------------------------------------------
# the game graph


@dataclass(frozen=True, eq=False)
class GameGraph:
    """A finite turn-based game.

    Vertices and players are referred to by index; ``vertices`` and
    ``players`` hold their display names.  ``successors[v]`` is sorted by
    target index, which fixes the iteration order of every algorithm.
    ``cycle_outcomes`` assigns outcomes to specific cycles and takes
    precedence over ``spec`` (needed e.g. for leaf games in which some
    non-leaf cycle must still be evaluated).
    """

    players: tuple
    vertices: tuple
    owner: tuple
    successors: tuple
    spec: object
    prefs: PreferenceTable
    initial: int | None = None
    cycle_outcomes: tuple = ()

    def __post_init__(self):
        n = len(self.vertices)
        object.__setattr__(self, "players", tuple(self.players))
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(self, "owner", tuple(self.owner))
        if len(self.owner) != n:
            raise GameValidationError("owner list length differs from vertex count")
        for v, p in enumerate(self.owner):
            if not 0 <= p < len(self.players):
                raise GameValidationError(f"vertex {self.vertices[v]} owned by unknown player {p}")
        if self.prefs.n_players != len(self.players):
            raise GameValidationError("preference table and player list disagree")
        if len(self.successors) != n:
            raise GameValidationError("successor list length differs from vertex count")
        succ = []
        for v, targets in enumerate(self.successors):
            for w in targets:
                if not 0 <= w < n:
                    raise DanglingEdge(f"edge from {self.vertices[v]} to unknown vertex {w}")
            targets = tuple(sorted(set(targets)))
            if not targets:
                raise SinkVertex(f"vertex {self.vertices[v]} has no outgoing edge")
            succ.append(targets)
        object.__setattr__(self, "successors", tuple(succ))
        leaves = frozenset(v for v in range(n) if succ[v] == (v,))
        object.__setattr__(self, "leaves", leaves)
        preds = [[] for _ in range(n)]
        for v in range(n):
            for w in succ[v]:
                preds[w].append(v)
        object.__setattr__(self, "predecessors", tuple(tuple(p) for p in preds))
        if self.initial is not None and not 0 <= self.initial < n:
            raise GameValidationError(f"initial vertex {self.initial} out of range")
        self._validate_spec()
        overrides = {}
        for cyc, o in self.cycle_outcomes:
            cyc = tuple(cyc)
            for k in range(len(cyc)):
                if cyc[(k + 1) % len(cyc)] not in succ[cyc[k]]:
                    raise DanglingEdge(f"override cycle {cyc} uses a missing edge")
            self.prefs.check(o)
            overrides[canonical_rotation(primitive_root(cyc))] = o
        object.__setattr__(self, "cycle_outcomes",
                           tuple((tuple(c), o) for c, o in self.cycle_outcomes))
        object.__setattr__(self, "_overrides", overrides)

    def _validate_spec(self):
        spec = self.spec
        if isinstance(spec, LeafOutcomes):
            for v, o in spec.outcomes.items():
                if v not in self.leaves:
                    raise LeafWithExtraEdge(
                        f"vertex {self.vertices[v]} has a leaf outcome but edges other than its self-loop")
                self.prefs.check(o)
            for v in sorted(self.leaves):
                if v not in spec.outcomes:
                    raise MissingLeafOutcome(f"leaf {self.vertices[v]} has no outcome")
        elif isinstance(spec, EdgeWeights):
            if self.prefs.kind != VECTOR:
                raise KindMismatch("edge weights need payoff-vector preferences")
            for v, targets in enumerate(self.successors):
                for w in targets:
                    weights = spec.weights.get((v, w))
                    if weights is None:
                        raise GameValidationError(
                            f"edge {self.vertices[v]}->{self.vertices[w]} has no weights")
                    if len(weights) != len(self.players):
                        raise GameValidationError(
                            f"edge {self.vertices[v]}->{self.vertices[w]} needs {len(self.players)} weights")
        elif isinstance(spec, Parity):
            if self.prefs.kind != VECTOR:
                raise KindMismatch("parity objectives need payoff-vector preferences")
            if len(spec.priorities) != len(self.vertices):
                raise GameValidationError("one priority tuple per vertex expected")
            for v, pr in enumerate(spec.priorities):
                if len(pr) != len(self.players):
                    raise GameValidationError(
                        f"vertex {self.vertices[v]} needs {len(self.players)} priorities")
        else:
            raise TypeError(f"unknown outcome specification {spec!r}")

    # -- basic queries -----------------------------------------------------

    @property
    def n(self) -> int:
        return len(self.vertices)

    @property
    def n_players(self) -> int:
        return len(self.players)

    def succ(self, v: int) -> tuple:
        """Successors of ``v`` other than ``v`` itself."""
        return tuple(w for w in self.successors[v] if w != v)

    def vertex_index(self, name: str) -> int:
        try:
            return self.vertices.index(name)
        except ValueError:
            raise KeyError(f"unknown vertex {name!r}") from None

    def player_index(self, name: str) -> int:
        try:
            return self.players.index(name)
        except ValueError:
            raise KeyError(f"unknown player {name!r}") from None

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.successors[u]

    @property
    def is_leafed(self) -> bool:
        return isinstance(self.spec, LeafOutcomes)

    def leaf_outcome(self, leaf: int):
        return self.spec.outcomes[leaf]

    def check_lasso(self, play: Lasso):
        seq = list(play.prefix) + list(play.cycle) + [play.cycle[0]]
        for v in seq:
            if not 0 <= v < self.n:
                raise ValueError(f"vertex {v} out of range")
        for a, b in zip(seq, seq[1:]):
            if not self.has_edge(a, b):
                raise ValueError(f"{self.vertices[a]}->{self.vertices[b]} is not an edge")

    def cycle_override(self, cycle: tuple):
        return self._overrides.get(canonical_rotation(primitive_root(tuple(cycle))))

    def with_initial(self, v: int | None) -> "GameGraph":
        return GameGraph(self.players, self.vertices, self.owner, self.successors,
                         self.spec, self.prefs, v, self.cycle_outcomes)


def build_game(desc: Mapping) -> GameGraph:
    """Validate a name-based description and build a :class:`GameGraph`.

    ``desc`` keys: ``players`` (names), ``vertices`` (list of dicts with
    ``name``, ``owner``, optional ``leaf`` outcome and ``priorities``),
    ``edges`` (``(src, dst)`` or ``(src, dst, weights)``), ``spec`` (one of
    ``leaf``, ``mean-payoff``, ``limsup``, ``parity``), ``outcomes`` and
    ``preferences`` (symbolic outcomes only), optional ``initial``,
    ``parity`` convention (e.g. ``"min-even"``) and ``cycles`` (list of
    ``(vertex names, outcome)`` overrides).
    """
    players = list(desc["players"])
    pidx = {p: i for i, p in enumerate(players)}
    if len(pidx) != len(players):
        raise GameValidationError("duplicate player names")
    vdescs = list(desc["vertices"])
    names = [d["name"] for d in vdescs]
    vidx = {v: i for i, v in enumerate(names)}
    if len(vidx) != len(names):
        raise GameValidationError("duplicate vertex names")
    owner = []
    for d in vdescs:
        if d["owner"] not in pidx:
            raise GameValidationError(f"vertex {d['name']} owned by unknown player {d['owner']!r}")
        owner.append(pidx[d["owner"]])
    kind = desc.get("spec", "leaf")

    succ = [[] for _ in names]
    weights = {}
    for e in desc["edges"]:
        src, dst = e[0], e[1]
        for end in (src, dst):
            if end not in vidx:
                raise DanglingEdge(f"edge {src}->{dst} mentions unknown vertex {end!r}")
        u, v = vidx[src], vidx[dst]
        succ[u].append(v)
        if len(e) > 2 and e[2] is not None:
            weights[(u, v)] = tuple(Fraction(x) for x in e[2])
    for v, s in enumerate(succ):
        if not s:
            raise SinkVertex(f"vertex {names[v]} has no outgoing edge")

    if kind == "leaf":
        if "outcomes" in desc:
            prefs = PreferenceTable.symbolic(
                desc["outcomes"], [desc["preferences"][p] for p in players])
            conv = str
        else:
            prefs = PreferenceTable.vector(len(players))
            conv = lambda o: tuple(Fraction(x) for x in o)  # noqa: E731
        leaf_out = {}
        for v, d in enumerate(vdescs):
            if d.get("leaf") is not None:
                if set(succ[v]) != {v}:
                    raise LeafWithExtraEdge(
                        f"vertex {names[v]} is declared a leaf but has other edges")
                leaf_out[v] = conv(d["leaf"])
        spec = LeafOutcomes(leaf_out)
    elif kind in ("mean-payoff", "limsup"):
        prefs = PreferenceTable.vector(len(players))
        spec = EdgeWeights(weights, kind)
    elif kind == "parity":
        prefs = PreferenceTable.vector(len(players))
        ext, win = desc.get("parity", "min-even").split("-")
        prio = tuple(tuple(int(x) for x in d["priorities"]) for d in vdescs)
        spec = Parity(prio, ext, win)
    else:
        raise GameValidationError(f"unknown outcome specification {kind!r}")

    def conv_outcome(o):
        return o if prefs.kind == SYMBOLIC else tuple(Fraction(x) for x in o)

    overrides = []
    for cyc, o in desc.get("cycles", ()):
        for c in cyc:
            if c not in vidx:
                raise DanglingEdge(f"cycle mentions unknown vertex {c!r}")
        overrides.append((tuple(vidx[c] for c in cyc), conv_outcome(o)))
    initial = desc.get("initial")
    if initial is not None:
        if initial not in vidx:
            raise GameValidationError(f"unknown initial vertex {initial!r}")
        initial = vidx[initial]
    return GameGraph(tuple(players), tuple(names), tuple(owner), tuple(tuple(s) for s in succ),
                     spec, prefs, initial, tuple(overrides))


# ---------------------------------------------------------------------------
# outcome evaluation


def outcome_of_lasso(game: GameGraph, play: Lasso):
    """Outcome of the play ``prefix · cycle^ω``; only the cycle matters."""
    play = play.normalized()
    cycle = play.cycle
    o = game.cycle_override(cycle)
    if o is not None:
        return o
    spec = game.spec
    if isinstance(spec, LeafOutcomes):
        if len(cycle) == 1 and cycle[0] in spec.outcomes:
            return spec.outcomes[cycle[0]]
        raise UndefinedOutcome(
            "no outcome for cycle (" + " ".join(game.vertices[v] for v in cycle) + ")", play)
    if isinstance(spec, EdgeWeights):
        edges = [(cycle[k], cycle[(k + 1) % len(cycle)]) for k in range(len(cycle))]
        ws = [spec.weights[e] for e in edges]
        if spec.aggregator == "mean-payoff":
            return tuple(sum((w[i] for w in ws), Fraction(0)) / len(ws)
                         for i in range(game.n_players))
        return tuple(max(w[i] for w in ws) for i in range(game.n_players))
    if isinstance(spec, Parity):
        pick = min if spec.extremum == "min" else max
        want = 0 if spec.winning == "even" else 1
        return tuple(Fraction(int(pick(spec.priorities[v][i] for v in cycle) % 2 == want))
                     for i in range(game.n_players))
    raise TypeError(f"unknown outcome specification {spec!r}")
