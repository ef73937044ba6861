"""Structural graph algorithms on game arenas."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .errors import NoCycle
from .game_model import GameGraph, Lasso


@dataclass(frozen=True)
class SccDecomposition:
    comp_of: dict          # vertex -> component id
    components: tuple      # component id -> sorted vertex tuple
    bottom: tuple          # component id -> bool

    @property
    def bottom_components(self) -> list:
        return [c for c, b in zip(self.components, self.bottom) if b]


def _sub_successors(game: GameGraph, within):
    if within is None:
        return game.successors
    return {v: tuple(w for w in game.successors[v] if w in within) for v in within}


def tarjan_sccs(vertices, successors) -> list:
    """Strongly connected components in Tarjan completion order.

    Iterative, roots taken in the order of ``vertices``.
    """
    index, low = {}, {}
    on_stack = set()
    stack, comps = [], []
    counter = 0
    for root in vertices:
        if root in index:
            continue
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        work = [(root, iter(successors[root]))]
        while work:
            v, it = work[-1]
            for w in it:
                if w not in index:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter(successors[w])))
                    break
                if w in on_stack:
                    low[v] = min(low[v], index[w])
            else:
                work.pop()
                if work:
                    u = work[-1][0]
                    low[u] = min(low[u], low[v])
                if low[v] == index[v]:
                    comp = []
                    while True:
                        w = stack.pop()
                        on_stack.discard(w)
                        comp.append(w)
                        if w == v:
                            break
                    comps.append(tuple(sorted(comp)))
    return comps


def bottom_sccs(game: GameGraph, within=None) -> SccDecomposition:
    """SCC decomposition of the game graph, or of the subgraph induced by ``within``.

    Components are sorted by their smallest vertex.
    """
    succ = _sub_successors(game, within)
    verts = range(game.n) if within is None else sorted(within)
    comps = sorted(tarjan_sccs(verts, succ))
    comp_of = {v: c for c, comp in enumerate(comps) for v in comp}
    bottom = tuple(all(comp_of[w] == c for v in comp for w in succ[v])
                   for c, comp in enumerate(comps))
    return SccDecomposition(comp_of, tuple(comps), bottom)


def attractor(game: GameGraph, target, controlling, within=None) -> set:
    """Vertices from which the coalition ``controlling`` can force a visit to ``target``.

    Computed on the subgraph induced by ``within`` (whole graph by default).
    """
    controlling = set(controlling)
    allowed = set(range(game.n)) if within is None else set(within)
    attr = set(target) & allowed
    # remaining[v]: successors of an opponent vertex not yet in the attractor
    remaining = {v: sum(1 for w in game.successors[v] if w in allowed) for v in allowed}
    queue = deque(sorted(attr))
    while queue:
        w = queue.popleft()
        for v in game.predecessors[w]:
            if v not in allowed or v in attr:
                continue
            if game.owner[v] in controlling:
                attr.add(v)
                queue.append(v)
            else:
                remaining[v] -= 1
                if remaining[v] == 0:
                    attr.add(v)
                    queue.append(v)
    return attr


def backward_reach_within(game: GameGraph, allowed, targets) -> set:
    """All vertices of ``allowed`` with a path to ``targets`` staying in ``allowed``."""
    allowed = set(allowed)
    seen = set(t for t in targets if t in allowed)
    queue = deque(seen)
    while queue:
        w = queue.popleft()
        for v in game.predecessors[w]:
            if v in allowed and v not in seen:
                seen.add(v)
                queue.append(v)
    return seen


def _dist_to(game: GameGraph, target: int, allowed) -> dict:
    dist = {target: 0}
    queue = deque([target])
    while queue:
        w = queue.popleft()
        for v in game.predecessors[w]:
            if v in allowed and v not in dist:
                dist[v] = dist[w] + 1
                queue.append(v)
    return dist


def smallest_simple_cycle(game: GameGraph, component) -> Lasso:
    """Shortest simple cycle inside ``component``; ties broken lexicographically.

    The cycle is reported starting at its smallest vertex, which is the
    lexicographically smallest rotation.
    """
    comp = sorted(component)
    cset = set(comp)

    def shortest_through(s, allowed):
        dist = _dist_to(game, s, allowed)
        lengths = [dist[x] + 1 for x in game.successors[s] if x in allowed and x in dist]
        return (min(lengths) if lengths else None), dist

    best = None
    for s in comp:
        length, _ = shortest_through(s, cset)
        if length is not None and (best is None or length < best):
            best = length
    if best is None:
        raise NoCycle(f"component {[game.vertices[v] for v in comp]} has no internal edge")
    for s in comp:
        allowed = {v for v in comp if v >= s}
        length, dist = shortest_through(s, allowed)
        if length != best:
            continue
        cycle = [s]
        remaining = best
        cur = s
        while remaining > 1:
            nxt = min(x for x in game.successors[cur]
                      if x in allowed and x != s and dist.get(x) == remaining - 1)
            cycle.append(nxt)
            cur = nxt
            remaining -= 1
        return Lasso((), tuple(cycle))
    raise AssertionError("unreachable: a shortest cycle exists")
