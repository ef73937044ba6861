"""Text formats: game files, profile files, fixpoint traces and DOT.

Game file::

    # comment
    players: p1 p2
    spec: leaf                  # leaf | mean-payoff | limsup | parity
    parity: min-even            # parity games only
    initial: v0

    [outcomes]                  # symbolic outcomes; omit for payoff vectors
    o1 o2 o3
    order p1: o1 < o2 < o3
    order p2: o2 < o3 < o1

    [vertices]
    v0 p1
    v2 p1 leaf=o2               # payoff vectors: leaf=1,3/2
    u  p2 prio=1,2              # parity priorities, one per player

    [edges]
    v0 v1
    v0 v1 w=1,-2                # mean-payoff / limsup weights

    [cycles]
    v0 v1 = o1

Profile file: one block per player, each a state table::

    player p1 states 3 initial 0
    0 v1 -> 1 l1
    1 v1 -> 2 v2

A row ``m v -> m2 [w]`` sets the update of state ``m`` on ``v`` to ``m2``
and, at owned vertices, the move to ``w``.  Missing rows keep the state.
"""
from __future__ import annotations

import re
from fractions import Fraction

import numpy as np

from .errors import GameSemanticError, GameSyntaxError, GameValidationError, WeakSpeError
from .game_model import (
    SYMBOLIC,
    EdgeWeights,
    GameGraph,
    LeafOutcomes,
    Parity,
    build_game,
    format_outcome,
)
from .strategy import MooreMachine, MooreProfile

_TOKEN = re.compile(r"\S+")
_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_.']*$")
_SECTIONS = ("outcomes", "vertices", "edges", "cycles")
_HEADERS = ("players", "spec", "parity", "initial")


def _tokens(line: str):
    """(column, token) pairs, 1-based columns, comments stripped."""
    cut = line.find("#")
    if cut >= 0:
        line = line[:cut]
    return [(m.start() + 1, m.group()) for m in _TOKEN.finditer(line)]


def _fraction(tok: str, line: int, col: int) -> Fraction:
    try:
        return Fraction(tok)
    except (ValueError, ZeroDivisionError):
        raise GameSyntaxError(line, col, "a rational number", tok) from None


def _vector(text: str, line: int, col: int) -> tuple:
    parts = text.split(",")
    out = []
    for p in parts:
        out.append(_fraction(p, line, col))
        col += len(p) + 1
    return tuple(out)


def _name(tok: str, line: int, col: int, what: str) -> str:
    if not _NAME.match(tok):
        raise GameSyntaxError(line, col, what, tok)
    return tok


def parse_game(text: str) -> GameGraph:
    """Parse a game file; errors carry 1-based line and column."""
    header = {}
    header_line = {}
    outcomes, orders = None, {}
    vertices, edges, cycles = [], [], []
    vline = {}
    section = None
    for ln, raw in enumerate(text.splitlines(), start=1):
        toks = _tokens(raw)
        if not toks:
            continue
        col, first = toks[0]
        if first.startswith("["):
            m = re.fullmatch(r"\[(\w+)\]", first)
            if not m or m.group(1) not in _SECTIONS or len(toks) > 1:
                raise GameSyntaxError(ln, col, "a section header " + " ".join(
                    f"[{s}]" for s in _SECTIONS), raw.strip())
            section = m.group(1)
            continue
        if section is None:
            key = first[:-1] if first.endswith(":") else None
            if key not in _HEADERS:
                raise GameSyntaxError(ln, col, "one of " + ", ".join(h + ":" for h in _HEADERS), first)
            if key in header:
                raise GameSemanticError(f"duplicate header {key}", ln)
            values = toks[1:]
            if not values:
                raise GameSyntaxError(ln, col + len(first), f"a value after {first}", "")
            if key != "players" and len(values) > 1:
                raise GameSyntaxError(ln, values[1][0], "end of line", values[1][1])
            header[key] = [(c, _name(t, ln, c, "a name") if key in ("players", "initial") else t)
                           for c, t in values]
            header_line[key] = ln
        elif section == "outcomes":
            if first == "order":
                if len(toks) < 3 or not toks[1][1].endswith(":"):
                    raise GameSyntaxError(ln, toks[1][0] if len(toks) > 1 else col + 5,
                                          "'order <player>: o < o ...'", raw.strip())
                player = toks[1][1][:-1]
                seq = []
                for k, (c, t) in enumerate(toks[2:]):
                    if k % 2 == 1:
                        if t != "<":
                            raise GameSyntaxError(ln, c, "'<'", t)
                    else:
                        seq.append((c, _name(t, ln, c, "an outcome name")))
                if len(toks[2:]) % 2 == 0:
                    raise GameSyntaxError(ln, toks[-1][0], "an outcome after '<'", toks[-1][1])
                if player in orders:
                    raise GameSemanticError(f"duplicate order for player {player}", ln)
                orders[player] = (ln, seq)
            else:
                if outcomes is not None:
                    raise GameSemanticError("outcome list declared twice", ln)
                outcomes = [(c, _name(t, ln, c, "an outcome name")) for c, t in toks]
                outcomes_line = ln
        elif section == "vertices":
            if len(toks) < 2:
                raise GameSyntaxError(ln, col + len(first), "'<vertex> <owner>'", raw.strip())
            d = {"name": _name(first, ln, col, "a vertex name"),
                 "owner": _name(toks[1][1], ln, toks[1][0], "a player name")}
            for c, t in toks[2:]:
                if t.startswith("leaf="):
                    d["leaf"] = (t[5:], ln, c + 5)
                elif t.startswith("prio="):
                    d["priorities"] = [int(_fraction(x, ln, c)) for x in t[5:].split(",")]
                else:
                    raise GameSyntaxError(ln, c, "leaf=<outcome> or prio=<list>", t)
            if d["name"] in vline:
                raise GameSemanticError(f"vertex {d['name']} declared twice", ln)
            vline[d["name"]] = ln
            vertices.append(d)
        elif section == "edges":
            if len(toks) < 2:
                raise GameSyntaxError(ln, col + len(first), "'<source> <target>'", raw.strip())
            w = None
            if len(toks) == 3:
                c, t = toks[2]
                if not t.startswith("w="):
                    raise GameSyntaxError(ln, c, "w=<weights>", t)
                w = _vector(t[2:], ln, c + 2)
            elif len(toks) > 3:
                raise GameSyntaxError(ln, toks[3][0], "end of line", toks[3][1])
            edges.append((first, toks[1][1], w, ln))
        elif section == "cycles":
            eq = [k for k, (_, t) in enumerate(toks) if t == "="]
            if len(eq) != 1 or eq[0] == 0 or eq[0] != len(toks) - 2:
                raise GameSyntaxError(ln, col, "'<vertex> ... = <outcome>'", raw.strip())
            names = [t for _, t in toks[:eq[0]]]
            c, o = toks[-1]
            cycles.append((names, (o, ln, c), ln))

    if "players" not in header:
        raise GameSyntaxError(1, 1, "a 'players:' header")
    players = [t for _, t in header["players"]]
    spec = header.get("spec", [(0, "leaf")])[0][1]
    if spec not in ("leaf", "mean-payoff", "limsup", "parity"):
        raise GameSemanticError(f"unknown spec {spec!r}", header_line["spec"])
    symbolic = outcomes is not None
    if symbolic and spec != "leaf":
        raise GameSemanticError("an [outcomes] section needs spec: leaf", outcomes_line)
    pset = set(players)

    desc = {"players": players, "spec": spec}
    if "parity" in header:
        desc["parity"] = header["parity"][0][1]
    if symbolic:
        onames = [t for _, t in outcomes]
        oset = set(onames)
        desc["outcomes"] = onames
        prefs = {}
        for p in players:
            if p not in orders:
                raise GameSemanticError(f"no preference order for player {p}", outcomes_line)
        for p, (ln, seq) in orders.items():
            if p not in pset:
                raise GameSemanticError(f"order for unknown player {p}", ln)
            for c, o in seq:
                if o not in oset:
                    raise GameSemanticError(f"unknown outcome {o} in order of {p}", ln)
            prefs[p] = [o for _, o in seq]
        desc["preferences"] = prefs

    def outcome(tok, ln, c):
        if symbolic:
            if tok not in oset:
                raise GameSemanticError(f"unknown outcome {tok}", ln)
            return tok
        if _NAME.match(tok):
            raise GameSemanticError(f"undeclared outcome {tok} (no [outcomes] section)", ln)
        return _vector(tok, ln, c)

    vnames = set()
    for d in vertices:
        ln = vline[d["name"]]
        if d["owner"] not in pset:
            raise GameSemanticError(f"vertex {d['name']} owned by unknown player {d['owner']}", ln)
        if "leaf" in d:
            d["leaf"] = outcome(*d["leaf"])
        vnames.add(d["name"])
    desc["vertices"] = vertices
    for src, dst, _, ln in edges:
        for end in (src, dst):
            if end not in vnames:
                raise GameSemanticError(f"edge mentions unknown vertex {end}", ln)
    desc["edges"] = [(s, t, w) for s, t, w, _ in edges]
    for names, _, ln in cycles:
        for v in names:
            if v not in vnames:
                raise GameSemanticError(f"cycle mentions unknown vertex {v}", ln)
    desc["cycles"] = [(names, outcome(*o)) for names, o, _ in cycles]
    if "initial" in header:
        init = header["initial"][0][1]
        if init not in vnames:
            raise GameSemanticError(f"unknown initial vertex {init}", header_line["initial"])
        desc["initial"] = init
    try:
        return build_game(desc)
    except GameValidationError as e:
        raise GameSemanticError(str(e)) from e


def _vec(o) -> str:
    return ",".join(str(x) for x in o)


def print_game(game: GameGraph) -> str:
    """Canonical text form: players, vertices and edges in index order."""
    lines = ["players: " + " ".join(game.players)]
    spec = game.spec
    if isinstance(spec, LeafOutcomes):
        lines.append("spec: leaf")
    elif isinstance(spec, EdgeWeights):
        lines.append(f"spec: {spec.aggregator}")
    else:
        lines.append("spec: parity")
        lines.append(f"parity: {spec.extremum}-{spec.winning}")
    if game.initial is not None:
        lines.append(f"initial: {game.vertices[game.initial]}")
    prefs = game.prefs
    if prefs.kind == SYMBOLIC:
        lines += ["", "[outcomes]", " ".join(prefs.outcomes)]
        for p, order in zip(game.players, prefs.orders):
            lines.append(f"order {p}: " + " < ".join(order))

    def out(o):
        return o if isinstance(o, str) else _vec(o)

    lines += ["", "[vertices]"]
    for v, name in enumerate(game.vertices):
        row = f"{name} {game.players[game.owner[v]]}"
        if isinstance(spec, LeafOutcomes) and v in spec.outcomes:
            row += f" leaf={out(spec.outcomes[v])}"
        if isinstance(spec, Parity):
            row += " prio=" + ",".join(str(x) for x in spec.priorities[v])
        lines.append(row)
    lines += ["", "[edges]"]
    for v in range(game.n):
        for w in game.successors[v]:
            row = f"{game.vertices[v]} {game.vertices[w]}"
            if isinstance(spec, EdgeWeights):
                row += " w=" + _vec(spec.weights[(v, w)])
            lines.append(row)
    if game.cycle_outcomes:
        lines += ["", "[cycles]"]
        for cyc, o in game.cycle_outcomes:
            lines.append(" ".join(game.vertices[v] for v in cyc) + f" = {out(o)}")
    return "\n".join(lines) + "\n"


def same_game(a: GameGraph, b: GameGraph) -> bool:
    """Structural equality of two games."""
    return (a.players == b.players and a.vertices == b.vertices and a.owner == b.owner
            and a.successors == b.successors and a.spec == b.spec and a.prefs == b.prefs
            and a.initial == b.initial and a.cycle_outcomes == b.cycle_outcomes)


def load_game(path) -> GameGraph:
    with open(path, encoding="utf-8") as fh:
        return parse_game(fh.read())


# ---------------------------------------------------------------------------
# profiles


def print_profile(game: GameGraph, profile: MooreProfile) -> str:
    """Canonical profile text; rows that keep the state and carry no move are omitted."""
    lines = []
    for m in profile.machines:
        lines.append(f"player {game.players[m.player]} states {m.n_states} initial {m.initial}")
        for s in range(m.n_states):
            for v in range(game.n):
                w = m.next_move(s, v)
                if w < 0 and m.next_state(s, v) == s:
                    continue
                row = f"{s} {game.vertices[v]} -> {m.next_state(s, v)}"
                if w >= 0:
                    row += f" {game.vertices[w]}"
                lines.append(row)
    return "\n".join(lines) + "\n"


def parse_profile(text: str, game: GameGraph) -> MooreProfile:
    tables = {}
    current = None
    for ln, raw in enumerate(text.splitlines(), start=1):
        toks = _tokens(raw)
        if not toks:
            continue
        words = [t for _, t in toks]
        if words[0] == "player":
            if len(words) != 6 or words[2] != "states" or words[4] != "initial":
                raise GameSyntaxError(ln, toks[0][0], "'player <name> states <n> initial <m>'",
                                      raw.strip())
            try:
                p = game.player_index(words[1])
            except KeyError:
                raise GameSemanticError(f"unknown player {words[1]}", ln) from None
            if p in tables:
                raise GameSemanticError(f"player {words[1]} has two machines", ln)
            try:
                k, init = int(words[3]), int(words[5])
            except ValueError:
                raise GameSyntaxError(ln, toks[3][0], "integers", raw.strip()) from None
            if k < 1 or not 0 <= init < k:
                raise GameSemanticError("bad state count or initial state", ln)
            update = np.tile(np.arange(k, dtype=np.int64)[:, None], (1, game.n))
            move = np.full((k, game.n), -1, dtype=np.int64)
            tables[p] = (k, init, update, move, set())
            current = p
            continue
        if current is None:
            raise GameSyntaxError(ln, toks[0][0], "'player ...' before state rows", words[0])
        if len(words) not in (4, 5) or words[2] != "->":
            raise GameSyntaxError(ln, toks[0][0], "'<state> <vertex> -> <state> [<move>]'",
                                  raw.strip())
        k, _, update, move, seen = tables[current]
        try:
            s, t = int(words[0]), int(words[3])
        except ValueError:
            raise GameSyntaxError(ln, toks[0][0], "integer states", raw.strip()) from None
        if not (0 <= s < k and 0 <= t < k):
            raise GameSemanticError("memory state out of range", ln)
        try:
            v = game.vertex_index(words[1])
            w = game.vertex_index(words[4]) if len(words) == 5 else -1
        except KeyError as e:
            raise GameSemanticError(str(e.args[0]), ln) from None
        if w >= 0 and game.owner[v] != current:
            raise GameSemanticError(f"move at {words[1]}, not owned by {game.players[current]}", ln)
        update[s, v] = t
        move[s, v] = w
        if w >= 0:
            seen.add((s, v))
    machines = []
    for p in range(game.n_players):
        if p not in tables:
            raise GameSemanticError(f"no machine for player {game.players[p]}")
        k, init, update, move, seen = tables[p]
        for s in range(k):
            for v in range(game.n):
                if game.owner[v] == p and (s, v) not in seen:
                    raise GameSemanticError(
                        f"player {game.players[p]} has no move in state {s} at {game.vertices[v]}")
        machines.append(MooreMachine(p, update, move, init))
    profile = MooreProfile(tuple(machines))
    try:
        profile.check(game)
    except WeakSpeError as e:
        raise GameSemanticError(str(e)) from e
    return profile


def load_profile(path, game: GameGraph) -> MooreProfile:
    with open(path, encoding="utf-8") as fh:
        return parse_profile(fh.read(), game)


# ---------------------------------------------------------------------------
# traces and DOT


def trace_tsv(game: GameGraph, labelings) -> str:
    """One row per step; one column per non-leaf vertex."""
    cols = [v for v in range(game.n) if v not in game.leaves]
    lines = ["step\t" + "\t".join(game.vertices[v] for v in cols)]
    for lab in labelings:
        lines.append(f"{lab.step}\t" + "\t".join(lab.format(v) for v in cols))
    return "\n".join(lines) + "\n"


def _quote(s: str) -> str:
    # label escapes such as \n are kept, only quotes are escaped
    return '"' + s.replace('"', '\\"') + '"'


def export_dot(game: GameGraph, profile: MooreProfile | None = None, labeling=None,
               start: int | None = None) -> str:
    """DOT digraph; bold edges are the moves the profile can prescribe from ``start``.

    For positional profiles every prescribed move is bold.  For memory
    profiles the bold edges are the moves made in some reachable product state.
    """
    bold = set()
    if profile is not None:
        if profile.positional:
            for v in range(game.n):
                bold.add((v, profile.positional_move(v, game.owner[v])))
        else:
            from .verify import reachable_product_states

            v0 = start if start is not None else (game.initial or 0)
            for s in reachable_product_states(game, profile, v0):
                p = game.owner[s.vertex]
                bold.add((s.vertex, profile.machines[p].next_move(s.memory[p], s.vertex)))
    lines = ["digraph game {"]
    for v, name in enumerate(game.vertices):
        label = f"{name}\\n{game.players[game.owner[v]]}"
        if labeling is not None:
            label += "\\n" + labeling.format(v)
        elif game.is_leafed and v in game.spec.outcomes:
            label += "\\n" + format_outcome(game.spec.outcomes[v])
        shape = "box" if v in game.leaves else "circle"
        lines.append(f"  {_quote(name)} [label={_quote(label)}, shape={shape}];")
    for v in range(game.n):
        for w in game.successors[v]:
            attr = " [style=bold, penwidth=3]" if (v, w) in bold else ""
            lines.append(f"  {_quote(game.vertices[v])} -> {_quote(game.vertices[w])}{attr};")
    lines.append("}")
    return "\n".join(lines) + "\n"
