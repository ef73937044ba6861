"""Command-line interface.

Exit codes: 0 success or certified, 1 counterexample or not layered,
2 input error.  Game and profile arguments that do not exist as files are
looked up among the bundled examples (``fig1.game``, ``g4.game``,
``fig1_thick.profile``, ``g4_ring.profile``).
"""
from __future__ import annotations

import argparse
import os
import sys
from importlib import resources

from .errors import GameSemanticError, WeakSpeError
from .fixpoint import replay, run_fixpoint
from .game_model import format_outcome
from .io import export_dot, parse_game, parse_profile, print_profile, trace_tsv
from .synthesis import BadPattern, check_layered, collapse_to_leafed, solve
from .verify import backward_induction_tree, check_very_weak_spe, enumerate_positional_profiles


class InputError(Exception):
    pass


def _read(path: str) -> str:
    if os.path.exists(path):
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    bundled = resources.files("weakspe") / "data" / os.path.basename(path)
    if bundled.is_file():
        return bundled.read_text(encoding="utf-8")
    raise InputError(f"no such file: {path}")


def _start(game, name):
    if name is None:
        return game.initial if game.initial is not None else 0
    try:
        return game.vertex_index(name)
    except KeyError:
        raise GameSemanticError(f"unknown start vertex {name}") from None


def cmd_solve(args, out):
    game = parse_game(_read(args.game))
    v0 = _start(game, args.start)
    profile = solve(game, v0).profile
    if args.emit == "dot":
        out.write(export_dot(game, profile, start=v0))
    else:
        out.write(print_profile(game, profile))
    return 0


def cmd_verify(args, out):
    game = parse_game(_read(args.game))
    profile = parse_profile(_read(args.profile), game)
    verdict = check_very_weak_spe(game, profile, _start(game, args.start))
    out.write(verdict.describe(game) + "\n")
    return 0 if verdict.ok else 1


def cmd_fixpoint(args, out):
    game = parse_game(_read(args.game))
    leafed = collapse_to_leafed(game).leafed
    lab, trace = run_fixpoint(leafed, check_invariants=args.check_invariants)
    if args.trace:
        out.write(trace_tsv(leafed, replay(leafed, trace)))
    else:
        for v in range(leafed.n):
            out.write(f"{leafed.vertices[v]}\t{lab.format(v)}\n")
    if args.check_invariants:
        out.write(f"# invariants hold; {trace.steps} steps\n")
    return 0


def cmd_layers(args, out):
    from .graph_analysis import bottom_sccs, smallest_simple_cycle
    from .game_model import outcome_of_lasso

    game = parse_game(_read(args.game))
    outs = []
    for comp in bottom_sccs(game).bottom_components:
        o = outcome_of_lasso(game, smallest_simple_cycle(game, comp))
        if o not in outs:
            outs.append(o)
    if game.prefs.kind == "symbolic":
        outs.sort(key=game.prefs.outcomes.index)
    else:
        outs.sort()
    res = check_layered(outs, game.prefs)
    fo = format_outcome
    if isinstance(res, BadPattern):
        pi, pj = game.players[res.i], game.players[res.i2]
        out.write(f"not layered: {fo(res.o)} < {fo(res.p)} < {fo(res.q)} for {pi} and "
                  f"{fo(res.q)} < {fo(res.o)} < {fo(res.p)} for {pj}\n")
        return 1
    for k, (block, orient) in enumerate(zip(res.blocks, res.orientation)):
        same = [game.players[i] for i, s in enumerate(orient) if s]
        rev = [game.players[i] for i, s in enumerate(orient) if not s]
        line = f"layer {k}: " + " < ".join(fo(o) for o in block) + f" [{' '.join(same)}]"
        if rev:
            line += f" reversed [{' '.join(rev)}]"
        out.write(line + "\n")
    return 0


def cmd_oracle(args, out):
    game = parse_game(_read(args.game))
    v0 = _start(game, args.start)
    if args.mode == "positional-exhaustion":
        total = good = 0
        for profile in enumerate_positional_profiles(game):
            total += 1
            verdict = check_very_weak_spe(game, profile, v0)
            if verdict.ok:
                good += 1
            elif args.verbose:
                moves = " ".join(f"{game.vertices[v]}->{game.vertices[profile.positional_move(v, game.owner[v])]}"
                                 for v in range(game.n) if v not in game.leaves)
                out.write(f"{moves}: {verdict.describe(game)}\n")
        out.write(f"{good} of {total} positional profiles are weak SPEs from {game.vertices[v0]}\n")
        return 0 if good else 1
    depth = args.depth if args.depth is not None else game.n
    profile = backward_induction_tree(game, v0, depth)
    verdict = check_very_weak_spe(game, profile, v0)
    out.write(print_profile(game, profile))
    out.write("# " + verdict.describe(game) + "\n")
    return 0 if verdict.ok else 1


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="weakspe", description="Weak subgame-perfect equilibria.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="synthesize a finite-memory weak SPE")
    p.add_argument("game")
    p.add_argument("--from", dest="start")
    p.add_argument("--emit", choices=("profile", "dot"), default="profile")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("verify", help="check a profile for profitable one-shot deviations")
    p.add_argument("game")
    p.add_argument("--profile", required=True)
    p.add_argument("--from", dest="start")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("fixpoint", help="run the Remove/Adjust labeling")
    p.add_argument("game")
    p.add_argument("--trace", action="store_true")
    p.add_argument("--check-invariants", action="store_true")
    p.set_defaults(func=cmd_fixpoint)

    p = sub.add_parser("layers", help="layer partition of the bottom-component outcomes")
    p.add_argument("game")
    p.set_defaults(func=cmd_layers)

    p = sub.add_parser("oracle", help="brute-force reference computations")
    p.add_argument("game")
    p.add_argument("--mode", required=True,
                   choices=("positional-exhaustion", "tree-backward-induction"))
    p.add_argument("--from", dest="start")
    p.add_argument("--depth", type=int)
    p.add_argument("-v", "--verbose", action="store_true")
    p.set_defaults(func=cmd_oracle)
    return ap


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return 2 if e.code else 0
    try:
        return args.func(args, out)
    except (InputError, WeakSpeError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
