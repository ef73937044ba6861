"""No positional weak SPE exists in the ring games, but small memory suffices.

Run with ``python3 notebooks/ring_memory.py``.
"""
import time

from weakspe.games import g_n, ring_profile
from weakspe.synthesis import solve_weak_spe
from weakspe.verify import check_very_weak_spe, enumerate_positional_profiles

for n in range(3, 8):
    game = g_n(n)
    t = time.perf_counter()
    refuted = sum(not check_very_weak_spe(game, p, 0).ok for p in enumerate_positional_profiles(game))
    hand = check_very_weak_spe(game, ring_profile(n), 0).ok
    prof = solve_weak_spe(game, 0)
    ok = check_very_weak_spe(game, prof, 0).ok
    print(f"n={n}: {refuted}/{2 ** n} positional profiles refuted, "
          f"counter profile ok={hand} (memory {n - 1}), "
          f"synthesized ok={ok} (memory {max(prof.memory_sizes)}), {time.perf_counter() - t:.2f}s")
