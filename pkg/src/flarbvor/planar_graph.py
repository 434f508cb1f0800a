"""Embedded plane graphs as combinatorial maps.

A graph is stored as a set of darts (half-edges).  Each dart knows its
twin, its origin vertex and its cyclic successor/predecessor in the
counterclockwise rotation around the origin.  Faces are orbits of
``face_next(d) = prev_at(twin(d))``; with that convention a face's
interior lies to the left of each of its darts and bounded faces come
out counterclockwise.

Vertices and surgery:

* ``build`` creates a cubic graph from rotation triples and verifies it
  is a planar embedding (Euler's relation, which also rules out
  disconnected input).
* ``link``/``cut`` splice single edges in and out at explicit rotation
  slots.  A slot is ``(vertex, after_dart)``: the new dart is inserted
  immediately after ``after_dart`` in counterclockwise order
  (``after_dart=None`` targets an isolated vertex).  ``cut`` returns
  the two slots that would restore the edge.

The surgery primitives do not enforce cubicity; callers re-check it
after a whole operation.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import isqrt
from typing import Iterable, Mapping, Optional, Sequence, Tuple

Slot = Tuple[int, Optional[int]]


class GraphError(Exception):
    pass


class NonCubic(GraphError):
    """A vertex does not have exactly three distinct neighbours."""


class AsymmetricAdjacency(GraphError):
    """u lists v as a neighbour but v does not list u."""


class NonPlanarEmbedding(GraphError):
    """The rotation system does not describe a connected sphere embedding."""


class UnknownEdge(GraphError):
    pass


class UnknownVertex(GraphError):
    pass


class InvalidSlot(GraphError):
    pass


class Disconnected(GraphError):
    pass


def ceil_sqrt(n: int) -> int:
    """Smallest integer >= sqrt(n)."""
    if n <= 0:
        return 0
    return isqrt(n - 1) + 1


class PlaneGraph:
    """Mutable combinatorial map.  Create via build() or graph surgery."""

    def __init__(self) -> None:
        self._twin: dict[int, int] = {}
        self._origin: dict[int, int] = {}
        self._next: dict[int, int] = {}
        self._prev: dict[int, int] = {}
        self._vdart: dict[int, Optional[int]] = {}
        self._dart_edge: dict[int, int] = {}
        self._edge_darts: dict[int, Tuple[int, int]] = {}
        self._fresh_dart = 0
        self._fresh_edge = 0
        self._fresh_vertex = 0
        self.link_count = 0
        self.cut_count = 0

    # -- elementary accessors -------------------------------------------

    @property
    def vertex_count(self) -> int:
        return len(self._vdart)

    @property
    def edge_count(self) -> int:
        return len(self._edge_darts)

    def vertices(self) -> list[int]:
        return list(self._vdart)

    def edges(self) -> list[int]:
        return list(self._edge_darts)

    def darts(self) -> list[int]:
        return list(self._twin)

    def has_vertex(self, v: int) -> bool:
        return v in self._vdart

    def has_edge(self, eid: int) -> bool:
        return eid in self._edge_darts

    def twin(self, d: int) -> int:
        return self._twin[d]

    def origin(self, d: int) -> int:
        return self._origin[d]

    def head(self, d: int) -> int:
        return self._origin[self._twin[d]]

    def next_at(self, d: int) -> int:
        """Next dart counterclockwise around origin(d)."""
        return self._next[d]

    def prev_at(self, d: int) -> int:
        return self._prev[d]

    def face_next(self, d: int) -> int:
        """Next dart along the face left of d."""
        return self._prev[self._twin[d]]

    def face_prev(self, d: int) -> int:
        return self._twin[self._next[d]]

    def edge_of(self, d: int) -> int:
        return self._dart_edge[d]

    def edge_darts(self, eid: int) -> Tuple[int, int]:
        try:
            return self._edge_darts[eid]
        except KeyError:
            raise UnknownEdge(str(eid)) from None

    def edge_ends(self, eid: int) -> Tuple[int, int]:
        d, t = self.edge_darts(eid)
        return self._origin[d], self._origin[t]

    def out_darts(self, v: int) -> list[int]:
        """Darts leaving v in counterclockwise order."""
        try:
            d0 = self._vdart[v]
        except KeyError:
            raise UnknownVertex(str(v)) from None
        if d0 is None:
            return []
        out = [d0]
        d = self._next[d0]
        while d != d0:
            out.append(d)
            d = self._next[d]
        return out

    def degree(self, v: int) -> int:
        return len(self.out_darts(v))

    def neighbors(self, v: int) -> list[int]:
        return [self.head(d) for d in self.out_darts(v)]

    def dart(self, u: int, v: int) -> int:
        """Some dart from u to v."""
        for d in self.out_darts(u):
            if self.head(d) == v:
                return d
        raise UnknownEdge(f"{u}-{v}")

    def edge_between(self, u: int, v: int) -> Optional[int]:
        for d in self.out_darts(u):
            if self.head(d) == v:
                return self._dart_edge[d]
        return None

    # -- faces -----------------------------------------------------------

    def face_of(self, d: int) -> Tuple[int, ...]:
        """The face orbit containing d, starting at d."""
        orbit = [d]
        e = self.face_next(d)
        while e != d:
            orbit.append(e)
            e = self.face_next(e)
        return tuple(orbit)

    def faces(self) -> list[Tuple[int, ...]]:
        seen: set[int] = set()
        out = []
        for d in self._twin:
            if d in seen:
                continue
            f = self.face_of(d)
            seen.update(f)
            out.append(f)
        return out

    @property
    def face_count(self) -> int:
        return len(self.faces())

    def euler_characteristic(self) -> int:
        return self.vertex_count - self.edge_count + self.face_count

    def is_cubic(self) -> bool:
        return all(self.degree(v) == 3 for v in self._vdart)

    def is_connected(self) -> bool:
        if not self._vdart:
            return True
        start = next(iter(self._vdart))
        seen = {start}
        stack = [start]
        while stack:
            for w in self.neighbors(stack.pop()):
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == self.vertex_count

    # -- surgery ---------------------------------------------------------

    def add_vertex(self) -> int:
        v = self._fresh_vertex
        self._fresh_vertex += 1
        self._vdart[v] = None
        return v

    def remove_vertex(self, v: int) -> None:
        if v not in self._vdart:
            raise UnknownVertex(str(v))
        if self._vdart[v] is not None:
            raise GraphError(f"vertex {v} still has incident edges")
        del self._vdart[v]

    def _new_dart(self, v: int) -> int:
        d = self._fresh_dart
        self._fresh_dart += 1
        self._origin[d] = v
        return d

    def _insert_dart(self, d: int, slot: Slot) -> None:
        v, after = slot
        if after is None:
            self._next[d] = d
            self._prev[d] = d
            self._vdart[v] = d
        else:
            nxt = self._next[after]
            self._next[after] = d
            self._prev[d] = after
            self._next[d] = nxt
            self._prev[nxt] = d

    def _check_slot(self, slot: Slot) -> None:
        v, after = slot
        if v not in self._vdart:
            raise InvalidSlot(f"unknown vertex {v}")
        if after is None:
            if self._vdart[v] is not None:
                raise InvalidSlot(f"vertex {v} is not isolated")
        else:
            if self._origin.get(after) != v:
                raise InvalidSlot(f"dart {after} does not leave vertex {v}")

    def link(self, slot_a: Slot, slot_b: Slot) -> int:
        """Insert an edge between two rotation slots; returns its id."""
        self._check_slot(slot_a)
        self._check_slot(slot_b)
        if slot_a == slot_b:
            raise InvalidSlot("identical slots")
        da = self._new_dart(slot_a[0])
        db = self._new_dart(slot_b[0])
        self._twin[da] = db
        self._twin[db] = da
        self._insert_dart(da, slot_a)
        self._insert_dart(db, slot_b)
        eid = self._fresh_edge
        self._fresh_edge += 1
        self._edge_darts[eid] = (da, db)
        self._dart_edge[da] = eid
        self._dart_edge[db] = eid
        self.link_count += 1
        return eid

    def _detach_dart(self, d: int) -> Optional[int]:
        v = self._origin[d]
        p, n = self._prev[d], self._next[d]
        if p == d:
            self._vdart[v] = None
            slot_after = None
        else:
            self._next[p] = n
            self._prev[n] = p
            if self._vdart[v] == d:
                self._vdart[v] = n
            slot_after = p
        del self._next[d], self._prev[d], self._origin[d]
        return slot_after

    def cut(self, eid: int) -> Tuple[Slot, Slot]:
        """Remove an edge; returns the two slots that would restore it."""
        d, t = self.edge_darts(eid)
        u, v = self._origin[d], self._origin[t]
        pa = self._detach_dart(d)
        pb = self._detach_dart(t)
        del self._twin[d], self._twin[t]
        del self._dart_edge[d], self._dart_edge[t]
        del self._edge_darts[eid]
        self.cut_count += 1
        return (u, pa), (v, pb)

    # -- misc --------------------------------------------------------------

    def copy(self) -> "PlaneGraph":
        g = PlaneGraph()
        g._twin = dict(self._twin)
        g._origin = dict(self._origin)
        g._next = dict(self._next)
        g._prev = dict(self._prev)
        g._vdart = dict(self._vdart)
        g._dart_edge = dict(self._dart_edge)
        g._edge_darts = dict(self._edge_darts)
        g._fresh_dart = self._fresh_dart
        g._fresh_edge = self._fresh_edge
        g._fresh_vertex = self._fresh_vertex
        g.link_count = self.link_count
        g.cut_count = self.cut_count
        return g

    def to_rotation(self) -> dict[int, list[int]]:
        """Neighbour lists in counterclockwise order."""
        return {v: self.neighbors(v) for v in self._vdart}

    def validate(self) -> None:
        """Check internal structural invariants (for tests)."""
        for d, t in self._twin.items():
            assert self._twin[t] == d and t != d
            assert self._dart_edge[d] == self._dart_edge[t]
        for d in self._twin:
            assert self._next[self._prev[d]] == d
            assert self._prev[self._next[d]] == d
            assert self._origin[self._next[d]] == self._origin[d]
        for v, d0 in self._vdart.items():
            if d0 is not None:
                assert self._origin[d0] == v
        for eid, (d, t) in self._edge_darts.items():
            assert self._twin[d] == t
        seen = set()
        for v in self._vdart:
            for d in self.out_darts(v):
                assert d not in seen
                seen.add(d)
        assert seen == set(self._twin)


def build(adjacency: Mapping[int, Sequence[int]]) -> PlaneGraph:
    """Build a cubic plane graph from counterclockwise rotation triples.

    ``adjacency[v]`` lists the three distinct neighbours of v in
    counterclockwise order.  Raises NonCubic / AsymmetricAdjacency for
    malformed input and NonPlanarEmbedding when the rotation system is
    not a connected genus-zero embedding (Euler's relation fails).
    """
    g = PlaneGraph()
    for v, nbrs in adjacency.items():
        nbrs = list(nbrs)
        if len(nbrs) != 3 or len(set(nbrs)) != 3 or v in nbrs:
            raise NonCubic(f"vertex {v}: neighbours {nbrs}")
        g._vdart[v] = None
        if isinstance(v, int):
            g._fresh_vertex = max(g._fresh_vertex, v + 1)

    dart_by_pair: dict[Tuple[int, int], int] = {}
    for v, nbrs in adjacency.items():
        ds = []
        for w in nbrs:
            if w not in adjacency:
                raise AsymmetricAdjacency(f"{v} lists unknown vertex {w}")
            d = g._new_dart(v)
            dart_by_pair[(v, w)] = d
            ds.append(d)
        for i, d in enumerate(ds):
            g._next[d] = ds[(i + 1) % 3]
            g._prev[d] = ds[(i - 1) % 3]
        g._vdart[v] = ds[0]

    for (v, w), d in dart_by_pair.items():
        t = dart_by_pair.get((w, v))
        if t is None:
            raise AsymmetricAdjacency(f"{v} lists {w} but not vice versa")
        g._twin[d] = t

    eid = 0
    for (v, w), d in sorted(dart_by_pair.items()):
        if d in g._dart_edge:
            continue
        t = g._twin[d]
        g._edge_darts[eid] = (d, t)
        g._dart_edge[d] = eid
        g._dart_edge[t] = eid
        eid += 1
    g._fresh_edge = eid

    if g.euler_characteristic() != 2:
        raise NonPlanarEmbedding(
            f"V-E+F = {g.euler_characteristic()} (needs 2; rotation system "
            "is disconnected or embeds on a higher-genus surface)"
        )
    return g


def link(g: PlaneGraph, slot_a: Slot, slot_b: Slot) -> int:
    return g.link(slot_a, slot_b)


def cut(g: PlaneGraph, eid: int) -> Tuple[Slot, Slot]:
    return g.cut(eid)


def potential(g: PlaneGraph, lam: int = 16) -> int:
    """Sum over all faces of lam * min(ceil_sqrt(|V|), face size)."""
    cap = ceil_sqrt(g.vertex_count)
    return lam * sum(min(cap, len(f)) for f in g.faces())


@dataclass(frozen=True)
class DegreeCountReport:
    """Truthiness reflects whether the degree/edge identity held."""

    edges: int
    deg1: int
    deg2: int
    deg3: int
    faces: int
    ok: bool

    def __bool__(self) -> bool:
        return self.ok


def degree123_edge_count_check(
    g: PlaneGraph, sub_vertices: Iterable[int]
) -> DegreeCountReport:
    """Degree/edge bookkeeping for a connected induced subgraph H.

    All vertices of H must have induced degree 1, 2 or 3.  With
    F_H = |E_H| - |V_H| + 1 the report checks
    |E_H| = 2*deg1 + deg2 + 3*F_H - 3.
    """
    sub = set(sub_vertices)
    if not sub:
        raise GraphError("empty vertex set")
    for v in sub:
        if v not in g._vdart:
            raise UnknownVertex(str(v))

    deg = {v: 0 for v in sub}
    for v in sub:
        for w in g.neighbors(v):
            if w in sub:
                deg[v] += 1
    e_h = sum(deg.values()) // 2

    start = next(iter(sub))
    seen = {start}
    stack = [start]
    while stack:
        v = stack.pop()
        for w in g.neighbors(v):
            if w in sub and w not in seen:
                seen.add(w)
                stack.append(w)
    if seen != sub:
        raise Disconnected(f"{len(sub) - len(seen)} vertices unreachable")

    counts = {1: 0, 2: 0, 3: 0}
    for v, k in deg.items():
        if k not in counts:
            raise GraphError(f"vertex {v} has induced degree {k}")
        counts[k] += 1
    f_h = e_h - len(sub) + 1
    ok = e_h == 2 * counts[1] + counts[2] + 3 * f_h - 3
    return DegreeCountReport(e_h, counts[1], counts[2], counts[3], f_h, ok)


# -- isomorphism ---------------------------------------------------------


def _dart_invariants(g: PlaneGraph) -> dict[int, Tuple[int, ...]]:
    face_len: dict[int, int] = {}
    for f in g.faces():
        n = len(f)
        for d in f:
            face_len[d] = n
    inv = {}
    for d in g.darts():
        around = []
        e = d
        while True:
            around.append(face_len[e])
            e = g.next_at(e)
            if e == d:
                break
        t = g.twin(d)
        around.append(face_len[t])
        inv[d] = tuple(around)
    return inv


def _code_from(g: PlaneGraph, start: int):
    number = {g.origin(start): 0}
    ref = {g.origin(start): start}
    order = [g.origin(start)]
    rows = []
    qi = 0
    while qi < len(order):
        v = order[qi]
        qi += 1
        d0 = ref[v]
        row = []
        d = d0
        while True:
            w = g.head(d)
            if w in number:
                row.append(number[w])
            else:
                number[w] = len(order)
                ref[w] = g.twin(d)
                order.append(w)
                row.append(-1)
            d = g.next_at(d)
            if d == d0:
                break
        rows.append(tuple(row))
    return tuple(rows), tuple(order)


def mirrored(g: PlaneGraph) -> PlaneGraph:
    """The same graph with every rotation reversed (reflected embedding)."""
    m = g.copy()
    m._next, m._prev = m._prev, m._next
    return m


def canonical_order(g: PlaneGraph):
    """Canonical code of a connected plane graph plus a vertex order
    realising it.

    Two plane graphs have equal codes iff they are related by an
    orientation-preserving embedding isomorphism, and then pairing the
    i-th vertices of their orders is one such isomorphism.
    """
    if g.vertex_count == 0:
        return (), ()
    if not g.is_connected():
        raise Disconnected("canonical_order needs a connected graph")
    inv = _dart_invariants(g)
    by_class: dict[Tuple[int, ...], list[int]] = {}
    for d, key in inv.items():
        by_class.setdefault(key, []).append(d)
    cls = min(by_class, key=lambda key: (len(by_class[key]), key))
    profile = tuple(sorted((key, len(ds)) for key, ds in by_class.items()))
    best = None
    best_order = None
    for d in sorted(by_class[cls]):
        rows, order = _code_from(g, d)
        if best is None or rows < best:
            best, best_order = rows, order
    return (g.vertex_count, g.edge_count, profile, best), best_order


def canonical_code(g: PlaneGraph):
    """Canonical form of a connected plane graph.

    Two connected plane graphs are related by an orientation-preserving
    embedding isomorphism iff their canonical codes are equal.
    """
    return canonical_order(g)[0]


def is_isomorphic(g1: PlaneGraph, g2: PlaneGraph) -> bool:
    """Embedding isomorphism of connected graphs, reflections included.

    For the 3-connected graphs this package manipulates, sphere
    embeddings are unique up to reflection, so this coincides with
    abstract graph isomorphism.
    """
    if (g1.vertex_count, g1.edge_count) != (g2.vertex_count, g2.edge_count):
        return False
    if g1.vertex_count == 0:
        return True
    f1 = sorted(len(f) for f in g1.faces())
    f2 = sorted(len(f) for f in g2.faces())
    if f1 != f2:
        return False
    c1 = canonical_code(g1)
    if c1 == canonical_code(g2):
        return True
    return c1 == canonical_code(mirrored(g2))
