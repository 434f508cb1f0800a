"""Self-reproducing Halin instances that keep the flarb expensive.

A lower-bound instance is a cubic Halin graph (a plane tree plus a
cycle through its leaves) together with a flarbable curve.  Executing
the flarb must cross at least k augmented and k shrinking faces, pay
at least k link/cut operations, and reproduce the graph up to
isomorphism, so the move can be repeated forever at cost Omega(sqrt(nu)).

The tree is a caterpillar: a spine whose vertices each hang one
pendant subtree inside the leaf cycle.  Most pendants are single
leaves (teeth); a staircase of pendant chains (combs) of sizes
1..k-2, laid out west to east with arithmetically shrinking gaps,
supplies the augmented faces.  The curve swallows the spine except
for its last k-2 slots, eats the top trunk vertex of every comb it
passes (one augmented face each), and closes through one pair of
adjacent teeth near the staircase foot (the seam).  The flarb re-hangs
the spine suffix as a fresh size-(k-2) comb while every other comb
shrinks by one, so the staircase reproduces itself.

``build`` seeds that staircase, slides the seam over a small window
until two consecutive graphs are isomorphic, and verifies every
required property on the fixed point with the real engine.  The
search is deterministic and cached per k; if nothing verifies it
fails loudly with diagnostics instead of returning a weakened
instance.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Set, Tuple

from .flarb_engine import (
    CurveSpec,
    FlarbReport,
    NotFlarbable,
    execute_flarb,
)
from .planar_graph import (
    PlaneGraph,
    build as build_graph,
    canonical_code,
    canonical_order,
    mirrored,
)


class InvalidK(ValueError):
    """Raised by build/run_cycle when k < 2."""


class FamilySearchError(RuntimeError):
    """No seed/parameter combination produced a verified instance."""


@dataclass(frozen=True)
class LowerBoundInstance:
    """A Halin graph with nu = 2k(k+1) - 2 vertices and its curve."""

    k: int
    graph: PlaneGraph
    curve: CurveSpec


def nu(k: int) -> int:
    return 2 * k * (k + 1) - 2


def _internal_budget(k: int) -> int:
    # A cubic tree with i internal vertices has i + 2 leaves, and the
    # Halin closure adds no vertices, so nu = 2i + 2.
    return k * k + k - 2


# -- caterpillar construction ---------------------------------------------


def _halin_from_hangs(hangs: Sequence[int]) -> PlaneGraph:
    """Cubic Halin graph: spine, one pendant per slot, leaf cycle.

    ``hangs[i]`` is the trunk length of the pendant comb below spine
    slot i (0 means a single tooth).  Comb teeth sit on the west side
    of the trunk and the trunk ends in a tip leaf.  The leaf cycle
    runs west end leaf, all pendant leaves west to east, east end
    leaf, and closes with one edge across the top.
    """
    m = len(hangs)
    if m < 2:
        raise ValueError("need at least two spine slots")
    ids = itertools.count(1)
    spine = [next(ids) for _ in range(m)]
    trunks = [[next(ids) for _ in range(g)] for g in hangs]
    el_w = next(ids)
    parent: Dict[int, int] = {}
    groups: List[List[int]] = []
    for i, g in enumerate(hangs):
        group = []
        if g == 0:
            tooth = next(ids)
            parent[tooth] = spine[i]
            group.append(tooth)
        else:
            for j in range(g):
                tooth = next(ids)
                parent[tooth] = trunks[i][j]
                group.append(tooth)
            tip = next(ids)
            parent[tip] = trunks[i][-1]
            group.append(tip)
        groups.append(group)
    el_e = next(ids)
    parent[el_w] = spine[0]
    parent[el_e] = spine[-1]
    ring = [el_w] + [leaf for grp in groups for leaf in grp] + [el_e]

    rot: Dict[int, Tuple[int, int, int]] = {}
    for i in range(m):
        west = spine[i - 1] if i else el_w
        east = spine[i + 1] if i + 1 < m else el_e
        south = trunks[i][0] if hangs[i] else groups[i][0]
        rot[spine[i]] = (west, south, east)
    for i, trunk in enumerate(trunks):
        for j, c in enumerate(trunk):
            up = trunk[j - 1] if j else spine[i]
            down = trunk[j + 1] if j + 1 < len(trunk) else groups[i][-1]
            rot[c] = (up, groups[i][j], down)
    size = len(ring)
    for r, leaf in enumerate(ring):
        rot[leaf] = (parent[leaf], ring[r - 1], ring[(r + 1) % size])
    return build_graph(rot)


# -- reading the structure back off an arbitrary Halin graph --------------


def _halin_split(
    g: PlaneGraph, idx: Dict[int, int]
) -> Optional[Tuple[List[int], Set[int]]]:
    """(leaf cycle, internal vertices) of a cubic Halin plane graph.

    The leaf cycle is the face whose removal leaves a spanning tree.
    If several faces qualify the canonically smallest one is chosen,
    so the decision is stable across isomorphic copies.  Returns None
    when the graph is not Halin.
    """
    want = g.vertex_count // 2 + 1
    best = None
    for face in g.faces():
        if len(face) != want:
            continue
        cycle = [g.origin(d) for d in face]
        if len(set(cycle)) != want:
            continue
        ring_edges = {g.edge_of(d) for d in face}
        if len(ring_edges) != want:
            continue
        adj: Dict[int, List[int]] = {v: [] for v in g.vertices()}
        for eid in g.edges():
            if eid in ring_edges:
                continue
            u, v = g.edge_ends(eid)
            adj[u].append(v)
            adj[v].append(u)
        start = next(iter(adj))
        seen = {start}
        stack = [start]
        while stack:
            for w in adj[stack.pop()]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        if len(seen) != g.vertex_count:
            continue
        signature = tuple(sorted(idx[v] for v in cycle))
        if best is None or signature < best[0]:
            best = (signature, cycle)
    if best is None:
        return None
    cycle = best[1]
    return cycle, set(g.vertices()) - set(cycle)


def _derived_spine(
    g: PlaneGraph, internals: Set[int], idx: Dict[int, int]
) -> List[int]:
    """Longest path of the internal tree, canonical tie-breaks."""
    if len(internals) == 1:
        return list(internals)
    adj = {
        v: sorted((w for w in g.neighbors(v) if w in internals), key=idx.get)
        for v in internals
    }

    def farthest(start: int) -> Tuple[int, Dict[int, int]]:
        dist = {start: 0}
        par: Dict[int, int] = {}
        queue = [start]
        qi = 0
        while qi < len(queue):
            v = queue[qi]
            qi += 1
            for w in adj[v]:
                if w not in dist:
                    dist[w] = dist[v] + 1
                    par[w] = v
                    queue.append(w)
        end = max(dist, key=lambda v: (dist[v], -idx[v]))
        return end, par

    root = min(internals, key=idx.get)
    u, _ = farthest(root)
    w, par = farthest(u)
    path = [w]
    while path[-1] != u:
        path.append(par[path[-1]])
    return path


def _make_move(
    g: PlaneGraph,
    ring_cycle: List[int],
    internals: Set[int],
    spine: List[int],
    t_sfx: int,
    seam_off: int,
) -> Optional[CurveSpec]:
    """Vertex set of one conveyor move, or None when it does not fit.

    The move eats the spine prefix (all but the last t_sfx slots) and
    the top trunk vertex of every pendant comb on the way, and closes
    the curve through one pair of adjacent teeth chosen near the
    window end (offset by ``seam_off``).
    """
    m = len(spine)
    we = m - t_sfx
    if we < 2 or we > m:
        return None
    ring = set(ring_cycle)
    hang: List[List[int]] = []
    for i, v in enumerate(spine):
        prev_v = spine[i - 1] if i else None
        next_v = spine[i + 1] if i + 1 < m else None
        hang.append([w for w in g.neighbors(v) if w not in (prev_v, next_v)])
    if len(hang[0]) != 2 or len(hang[-1]) != 2:
        return None
    if any(h in internals for h in hang[0] + hang[-1]):
        # a longest path cannot end next to an internal pendant
        return None

    eaten = [
        hang[i][0]
        for i in range(1, min(we, m - 1))
        if hang[i][0] in internals
    ]

    target = we - 2 - seam_off
    seam = None
    candidates = sorted(
        (p for p in range(1, min(we - 1, m - 2))),
        key=lambda p: (abs(p - target), p),
    )
    for p in candidates:
        if hang[p][0] in ring and hang[p + 1][0] in ring:
            seam = p
            break
    if seam is None:
        return None
    inside = set(spine[:we])
    inside.update(eaten)
    inside.add(hang[seam][0])
    inside.add(hang[seam + 1][0])
    return CurveSpec.of(inside)


# -- fixed-point search ----------------------------------------------------


def _staircase(k: int) -> Tuple[int, ...]:
    """Comb sizes 1..k-2 at slots 3, then strides k+1, k, ..., 5.

    The slot count (k*k + 5k - 6) / 2 plus the comb internals
    (k-2)(k-1)/2 meets the internal budget exactly for every k >= 2.
    """
    m = (k * k + 5 * k - 6) // 2
    z = [0] * m
    pos = 3
    for size in range(1, k - 1):
        z[pos] = size
        pos += k + 2 - size
    assert m + sum(z) == _internal_budget(k)
    return tuple(z)


def _search_plan(
    k: int,
) -> List[Tuple[Tuple[int, ...], Tuple[int, int, bool]]]:
    """(seed pattern, move parameters) pairs, most promising first."""
    plan = []
    stair = _staircase(k)
    m = len(stair)
    we = m - (k - 2)
    if k >= 4:
        seam_slots = range(4, min(4 + k, we - 1))
    else:
        seam_slots = range(1, we - 1)
    for p in sorted(seam_slots, key=lambda q: (abs(q - (k - 2)), q)):
        off = we - 2 - p
        if off >= 0:
            plan.append((stair, (k - 2, off, False)))
    # fallback sweep around the staircase parameters
    for t in (k - 1, k - 3, k):
        if t < 0 or m - t < 2:
            continue
        for p in sorted(range(1, m - t - 1), key=lambda q: (abs(q - (k - 2)), q)):
            plan.append((stair, (t, m - t - 2 - p, False)))
    return plan


def _step(
    g: PlaneGraph, params: Tuple[int, int, bool]
) -> Optional[Tuple[CurveSpec, PlaneGraph, FlarbReport]]:
    """Derive the move on g, run it on a copy, return what happened."""
    t_sfx, seam_off, flip = params
    _, order = canonical_order(g)
    idx = {v: i for i, v in enumerate(order)}
    split = _halin_split(g, idx)
    if split is None:
        return None
    ring_cycle, internals = split
    spine = _derived_spine(g, internals, idx)
    if flip:
        spine = spine[::-1]
    curve = _make_move(g, ring_cycle, internals, spine, t_sfx, seam_off)
    if curve is None:
        return None
    out = g.copy()
    try:
        report = execute_flarb(out, curve)
    except NotFlarbable:
        return None
    return curve, out, report


def _find_fixed_point(
    k: int, seed: PlaneGraph, params: Tuple[int, int, bool]
) -> Optional[Tuple[PlaneGraph, CurveSpec, FlarbReport]]:
    g = seed
    code = canonical_code(g)
    seen = {code}
    max_rounds = 4 * k + 40
    for _ in range(max_rounds):
        stepped = _step(g, params)
        if stepped is None:
            return None
        curve, out, report = stepped
        if report.v_after != report.v_before:
            return None
        out_code = canonical_code(out)
        if out_code == code or out_code == canonical_code(mirrored(g)):
            ok = (
                report.augmented >= k
                and report.shrinking >= k
                and report.cost >= k
            )
            return (g, curve, report) if ok else None
        if out_code in seen:
            return None  # limit cycle without a fixed point
        seen.add(out_code)
        g, code = out, out_code
    return None


_CACHE: Dict[int, Tuple[PlaneGraph, CurveSpec, Tuple[int, int, bool]]] = {}


def build(k: int) -> LowerBoundInstance:
    """A verified self-reproducing instance with nu = 2k(k+1) - 2."""
    if not isinstance(k, int) or isinstance(k, bool) or k < 2:
        raise InvalidK(f"k must be an integer >= 2, got {k!r}")
    if k not in _CACHE:
        tried = 0
        seeds: Dict[Tuple[int, ...], PlaneGraph] = {}
        for pattern, params in _search_plan(k):
            if pattern not in seeds:
                seeds[pattern] = _halin_from_hangs(pattern)
                assert seeds[pattern].vertex_count == nu(k)
            tried += 1
            found = _find_fixed_point(k, seeds[pattern].copy(), params)
            if found is not None:
                graph, curve, _ = found
                _CACHE[k] = (graph, curve, params)
                break
        if k not in _CACHE:
            raise FamilySearchError(
                f"no verified instance for k={k} "
                f"after {tried} seed/parameter combinations"
            )
    graph, curve, _ = _CACHE[k]
    return LowerBoundInstance(k, graph.copy(), curve)


def run_cycle(k: int, rounds: int) -> List[FlarbReport]:
    """Repeat the move ``rounds`` times, re-deriving it each round.

    The move rule is isomorphism-invariant, so on the fixed point it
    reproduces itself; every returned report pays cost >= k.
    """
    if rounds < 1:
        raise ValueError(f"rounds must be >= 1, got {rounds!r}")
    inst = build(k)
    params = _CACHE[k][2]
    g = inst.graph
    reports: List[FlarbReport] = []
    for _ in range(rounds):
        stepped = _step(g, params)
        if stepped is None:
            raise FamilySearchError(
                f"move stopped applying after {len(reports)} rounds (k={k})"
            )
        _, g, report = stepped
        reports.append(report)
    return reports
