"""Step through the Remove/Adjust labeling on the four-player ring game.

Run with ``python3 notebooks/fixpoint_walkthrough.py``.
"""
from weakspe.fixpoint import AdjustRemoved, Converged, Remove, replay, run_fixpoint
from weakspe.games import g_n
from weakspe.synthesis import solve
from weakspe.verify import check_very_weak_spe

game = g_n(4)
lab, trace = run_fixpoint(game, check_invariants=True)

print("step 0 labels every ring vertex with all four leaf outcomes")
events = [e for e in trace.events if not isinstance(e, Converged)]
for step, labels in enumerate(replay(game, trace)):
    row = "  ".join(f"{labels.format(v):14s}" for v in range(4))
    what = ""
    if step:
        event = events[step - 1]
        if isinstance(event, Remove):
            what = f"remove {event.outcome} at {game.vertices[event.vertex]}"
        elif isinstance(event, AdjustRemoved):
            what = f"adjust drops {len(event.pairs)} label(s)"
    print(f"{step:2d}  {row}  {what}")

# each player ends up unable to secure its own leaf along the ring
print()
for v in range(4):
    print(game.vertices[v], "keeps", lab.format(v))

# the synthesized profile needs memory: one state per leaf outcome plus one
sol = solve(game, 0)
print()
print("memory per player:", sol.profile.memory_sizes)
print("certified:", check_very_weak_spe(game, sol.profile, 0).ok)
