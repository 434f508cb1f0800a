"""Flarb rewrites on cubic plane graphs.

A flarb replaces the part of a plane graph enclosed by a simple closed
curve with a new cycle, one vertex per crossed edge.  The curve is given
combinatorially as the set of vertices strictly inside it; the crossed
edges (the fleeq) are recovered by walking the boundary of that set.

The executor reuses as much of the old graph as it can: a face whose
enclosed boundary arc is a single edge keeps that edge and both of its
endpoints, so the rewrite touches only the faces that actually change.
All surgery goes through :meth:`PlaneGraph.link` / :meth:`PlaneGraph.cut`
so the graph's own operation counters price the work.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import FrozenSet, Iterable, Optional, Tuple, Union

from .planar_graph import (
    GraphError,
    PlaneGraph,
    UnknownVertex,
    ceil_sqrt,
    potential,
)

AUGMENTED = "augmented"
PRESERVED = "preserved"
SHRINKING = "shrinking"


class NotFlarbable(GraphError):
    """The curve does not describe a legal flarb on this graph."""


class EmptyInterior(NotFlarbable):
    pass


class DisconnectedInterior(NotFlarbable):
    pass


class FaceCrossedTwice(NotFlarbable):
    """Some face meets the curve in more than one boundary arc."""


@dataclass(frozen=True)
class CurveSpec:
    """A flarb curve, described by the vertices strictly inside it."""

    inside_vertices: FrozenSet[int]

    @staticmethod
    def of(vertices: Iterable[int]) -> "CurveSpec":
        return CurveSpec(frozenset(vertices))


@dataclass(frozen=True)
class FleeqPosition:
    """One crossed edge: its outward dart, edge id and endpoints."""

    dart: int
    edge: int
    inside: int
    outside: int


@dataclass(frozen=True)
class Fleeq:
    """Crossed edges in circular order, as met along the curve."""

    positions: Tuple[FleeqPosition, ...]
    inside: FrozenSet[int]

    @property
    def size(self) -> int:
        return len(self.positions)

    def edges(self) -> Tuple[int, ...]:
        return tuple(p.edge for p in self.positions)


@dataclass(frozen=True)
class FaceClassification:
    """Per-position face tags plus the fully enclosed faces."""

    tags: Tuple[str, ...]
    arc_lengths: Tuple[int, ...]
    sizes_before: Tuple[int, ...]
    reuse_edges: Tuple[Optional[int], ...]
    arc_heads: Tuple[int, ...]  # inside endpoint u_i of each position
    enclosed_sizes: Tuple[int, ...]

    @property
    def augmented(self) -> int:
        return sum(1 for t in self.tags if t == AUGMENTED)

    @property
    def shrinking(self) -> int:
        return sum(1 for t in self.tags if t == SHRINKING)

    @property
    def preserved(self) -> int:
        return sum(1 for t in self.tags if t == PRESERVED)

    @property
    def enclosed(self) -> int:
        return len(self.enclosed_sizes)


@dataclass(frozen=True)
class FlarbReport:
    """Everything observable about one executed flarb."""

    fleeq_size: int
    enclosed: int
    preserved: int
    augmented: int
    shrinking: int
    sigma: int
    links: int
    cuts: int
    phi_before: int
    phi_after: int
    v_before: int
    v_after: int
    sizes_before: Tuple[int, ...]
    sizes_after: Tuple[int, ...]
    tags: Tuple[str, ...]
    exploited: FrozenSet[int]
    kept_positions: FrozenSet[int]

    @property
    def cost(self) -> int:
        return self.links + self.cuts

    @property
    def delta_v(self) -> int:
        return self.v_after - self.v_before

    def within_cost_bounds(self) -> bool:
        """Cost sandwich in |F|, |B|, |P| (lower bound may be half-integral)."""
        f, b, p = self.fleeq_size, self.enclosed, self.preserved
        return f + b - p <= 2 * self.cost and self.cost <= 4 * f + 3 * b - 4 * p


CurveLike = Union[CurveSpec, Iterable[int]]


def _inside_set(curve: CurveLike) -> FrozenSet[int]:
    if isinstance(curve, CurveSpec):
        return curve.inside_vertices
    return frozenset(curve)


def validate_flarbable(g: PlaneGraph, curve: CurveLike) -> Fleeq:
    """Check the curve is flarbable and return its fleeq.

    Raises EmptyInterior, UnknownVertex, DisconnectedInterior,
    FaceCrossedTwice or plain NotFlarbable with the reason.
    """
    inside = _inside_set(curve)
    if not inside:
        raise EmptyInterior("curve encloses no vertices")
    for v in inside:
        if not g.has_vertex(v):
            raise UnknownVertex(v)
    if len(inside) == g.vertex_count:
        raise NotFlarbable("curve encloses the whole graph")

    # the enclosed vertices must induce a connected subgraph
    start = next(iter(inside))
    stack, seen = [start], {start}
    while stack:
        for nb in g.neighbors(stack.pop()):
            if nb in inside and nb not in seen:
                seen.add(nb)
                stack.append(nb)
    if seen != inside:
        raise DisconnectedInterior(
            f"{len(inside) - len(seen)} enclosed vertices unreachable"
        )

    cut_darts = [
        d for v in sorted(inside) for d in g.out_darts(v) if g.head(d) not in inside
    ]
    if len(cut_darts) < 3:
        raise NotFlarbable(f"curve crosses only {len(cut_darts)} edges")

    def next_cut(d: int) -> int:
        e = g.next_at(d)
        for _ in range(2 * len(cut_darts) * 4 + 8):
            if g.head(e) not in inside:
                return e
            e = g.next_at(g.twin(e))
        raise NotFlarbable("boundary walk does not close")

    # walk the boundary; it must visit every crossed edge exactly once,
    # otherwise the exterior is disconnected along the curve
    d0 = min(cut_darts)
    order = [d0]
    d = next_cut(d0)
    while d != d0:
        if len(order) > len(cut_darts):
            raise NotFlarbable("boundary walk does not close")
        order.append(d)
        d = next_cut(d)
    if len(order) != len(cut_darts):
        raise NotFlarbable("curve boundary is not a single closed walk")

    # every crossed face must be crossed along one contiguous arc: its
    # orbit contains exactly one outward dart and one inward twin
    specials = set(cut_darts) | {g.twin(d) for d in cut_darts}
    k = len(order)
    for i, di in enumerate(order):
        expected = {di, g.twin(order[(i + 1) % k])}
        found = {x for x in g.face_of(di) if x in specials}
        if found != expected:
            raise FaceCrossedTwice(
                f"face of position {i} meets the curve {len(found)} times"
            )

    positions = tuple(
        FleeqPosition(dart=d, edge=g.edge_of(d), inside=g.origin(d), outside=g.head(d))
        for d in order
    )
    return Fleeq(positions=positions, inside=inside)


def classify(g: PlaneGraph, fleeq: Fleeq) -> FaceClassification:
    """Tag every crossed face as preserved, augmented or shrinking.

    A face is preserved when the boundary arc inside the curve is a
    single edge; that edge can be reused as the face's new cycle edge.
    An empty arc means the face only gains a vertex (augmented); a
    longer arc means the face shrinks.
    """
    k = fleeq.size
    tags = []
    arc_lengths = []
    sizes = []
    reuse = []
    heads = []
    for i, pos in enumerate(fleeq.positions):
        nxt = fleeq.positions[(i + 1) % k]
        orbit = g.face_of(pos.dart)
        idx = orbit.index(g.twin(nxt.dart))
        arc = orbit[idx + 1 :]
        sizes.append(len(orbit))
        arc_lengths.append(len(arc))
        heads.append(pos.inside)
        if not arc:
            tags.append(AUGMENTED)
            reuse.append(None)
        elif len(arc) == 1:
            tags.append(PRESERVED)
            reuse.append(g.edge_of(arc[0]))
        else:
            tags.append(SHRINKING)
            reuse.append(None)

    enclosed_sizes = []
    for face in g.faces():
        if all(g.origin(d) in fleeq.inside for d in face):
            enclosed_sizes.append(len(face))

    return FaceClassification(
        tags=tuple(tags),
        arc_lengths=tuple(arc_lengths),
        sizes_before=tuple(sizes),
        reuse_edges=tuple(reuse),
        arc_heads=tuple(heads),
        enclosed_sizes=tuple(sorted(enclosed_sizes)),
    )


def plan_reuse(
    fleeq: Fleeq, cls: FaceClassification
) -> Tuple[dict, FrozenSet[int]]:
    """Decide which preserved faces are actually exploited.

    An exploited face keeps both endpoints of its reused edge as the new
    cycle vertices at its two positions.  Two preserved faces can claim
    the same vertex for different positions; claims are granted greedily
    in a canonical order (sorted by the ordered endpoint pair) so the
    outcome does not depend on where the boundary walk started.
    """
    k = fleeq.size
    candidates = [
        (cls.arc_heads[i], cls.arc_heads[(i + 1) % k], i)
        for i in range(k)
        if cls.tags[i] == PRESERVED
    ]
    claims: dict[int, int] = {}
    owners: dict[int, int] = {}
    exploited = set()
    for u, u_next, i in sorted(candidates):
        pairs = ((i, u), ((i + 1) % k, u_next))
        if all(claims.get(p, v) == v and owners.get(v, p) == p for p, v in pairs):
            exploited.add(i)
            for p, v in pairs:
                claims[p] = v
                owners[v] = p
    return claims, frozenset(exploited)


def execute_flarb(g: PlaneGraph, curve: CurveLike) -> FlarbReport:
    """Perform the flarb in place and report what it did."""
    fleeq = validate_flarbable(g, curve)
    cls = classify(g, fleeq)
    claims, exploited = plan_reuse(fleeq, cls)
    survivors = set(claims.values())
    k = fleeq.size
    inside = fleeq.inside

    phi_before = potential(g)
    v_before = g.vertex_count
    links0, cuts0 = g.link_count, g.cut_count

    interior = []
    seen = set()
    for v in inside:
        for d in g.out_darts(v):
            if g.head(d) in inside:
                e = g.edge_of(d)
                if e not in seen:
                    seen.add(e)
                    interior.append(e)
    reused_edges = {cls.reuse_edges[i] for i in exploited}

    w = {i: claims[i] if i in claims else g.add_vertex() for i in range(k)}

    vacated: dict[int, Tuple[int, Optional[int]]] = {}
    vdart: dict[int, int] = {}

    # replace each unkept fleeq edge right away so the outside slot the
    # cut vacates cannot be invalidated by a later cut at the same vertex
    for i, pos in enumerate(fleeq.positions):
        if i in claims:
            continue
        slot_a, slot_b = g.cut(pos.edge)
        slot_u, slot_v = (slot_a, slot_b) if slot_a[0] == pos.inside else (slot_b, slot_a)
        if pos.inside in survivors:
            vacated[pos.inside] = slot_u
        eid = g.link(slot_v, (w[i], None))
        da, db = g.edge_darts(eid)
        vdart[i] = db if g.origin(db) == w[i] else da

    for e in interior:
        if e in reused_edges:
            continue
        slot_a, slot_b = g.cut(e)
        for slot in (slot_a, slot_b):
            if slot[0] in survivors:
                vacated[slot[0]] = slot

    for v in inside:
        if v not in survivors:
            g.remove_vertex(v)

    # close the new cycle; reused edges already sit in place
    ring_tail: dict[int, int] = {}
    for i in range(k):
        if i in exploited:
            continue
        j = (i + 1) % k
        if i in claims:
            slot_t = vacated[w[i]]
        else:
            slot_t = (w[i], vdart[i])
        if j in claims:
            slot_h = vacated[w[j]]
        elif j == 0:
            slot_h = (w[0], ring_tail[0])
        else:
            slot_h = (w[j], vdart[j])
        eid = g.link(slot_t, slot_h)
        da, db = g.edge_darts(eid)
        ring_tail[i] = da if g.origin(da) == w[i] else db

    # locate the new cycle and measure the surviving faces
    cycle_darts = {}
    for i in range(k):
        if i in exploited:
            e = cls.reuse_edges[i]
            assert e is not None
            da, db = g.edge_darts(e)
            cycle_darts[i] = da if g.origin(da) == w[i] else db
        else:
            cycle_darts[i] = ring_tail[i]
    inner = g.face_of(cycle_darts[0])
    assert len(inner) == k and set(inner) == set(cycle_darts.values()), (
        "new cycle does not bound a single face"
    )
    sizes_after = []
    for i in range(k):
        after = len(g.face_of(g.twin(cycle_darts[i])))
        predicted = cls.sizes_before[i] - cls.arc_lengths[i] + 1
        assert after == predicted, f"face {i}: got {after}, expected {predicted}"
        sizes_after.append(after)

    assert g.is_cubic() and g.euler_characteristic() == 2 and g.is_connected()

    v_after = g.vertex_count
    assert abs(v_after - v_before) <= 2
    sigma = (k - len(claims)) + (k - len(exploited))

    return FlarbReport(
        fleeq_size=k,
        enclosed=cls.enclosed,
        preserved=cls.preserved,
        augmented=cls.augmented,
        shrinking=cls.shrinking,
        sigma=sigma,
        links=g.link_count - links0,
        cuts=g.cut_count - cuts0,
        phi_before=phi_before,
        phi_after=potential(g),
        v_before=v_before,
        v_after=v_after,
        sizes_before=cls.sizes_before,
        sizes_after=tuple(sizes_after),
        tags=cls.tags,
        exploited=exploited,
        kept_positions=frozenset(claims),
    )


def check_shrinkage(report: FlarbReport) -> bool:
    """Verify the aggregate shrinkage inequality on small-face runs.

    Over every maximal circular run of crossed faces that all started
    below the ceil-sqrt size cap, the total size decrease must be at
    least half the number of shrinking faces involved.  Each run is
    extended by the two large faces bounding it: an augmented face at
    a run boundary grows by one edge and its compensating shrinkage
    lives in the neighbouring large face, so chopping the account at
    the cap would fail legitimate flarbs.  Runs with no shrinking
    faces hold vacuously.
    """
    k = report.fleeq_size
    cap = ceil_sqrt(report.v_before)
    small = [report.sizes_before[i] < cap for i in range(k)]
    if all(small):
        runs = [list(range(k))]
    else:
        # a run may wrap past position k-1; the modular scan below picks
        # it up whole because it only starts runs at a non-small boundary
        runs = []
        i = 0
        while i < k:
            if small[i] and not small[i - 1]:
                run = []
                j = i
                while small[j % k]:
                    run.append(j % k)
                    j += 1
                runs.append([(i - 1) % k] + run + [j % k])
                i = j
            else:
                i += 1
    for run in runs:
        s_run = sum(1 for i in run if report.tags[i] == SHRINKING)
        if s_run == 0:
            continue
        drop = sum(report.sizes_before[i] - report.sizes_after[i] for i in run)
        if 2 * drop < s_run:
            return False
    return True
