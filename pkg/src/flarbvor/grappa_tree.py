"""Dynamic rooted forests with per-edge marks and oracle-guided search.

A ``GrappaTree`` maintains a forest of rooted trees under ``make_tree``,
``link``, ``cut`` and ``evert``, stores a left and a right mark on every
edge, and supports ``oracle_search``: locating an edge the caller can
only describe through a side oracle.  Internally each preferred path is
a splay tree whose in-order is the top-to-bottom path order, so every
operation is amortized O(log n).  That substitutes a self-adjusting
structure for a worst-case balanced one with the same interface; the
trade is invisible to callers except that *queries restructure the
tree too* (see below).

Marks sit on edges and are oriented: walking the path from the root
down through an edge, one mark is on the left and one on the right.
``evert`` reverses the walk direction of every edge on the reversed
path, so their left and right marks swap.  ``left_mark``/``right_mark``
overwrite one side of every edge on the root-to-v path in O(log n) via
lazy tags.

The oracle protocol: an oracle is called as
``oracle(f, f_adj, left, right, adj_left, adj_right)`` where ``f`` and
``f_adj`` are edge ids sharing an endpoint and the other four arguments
are their current marks.  It must return True if the target edge lies
in the component of the forest-minus-``f`` that contains ``f_adj``,
and False otherwise (the False side includes ``f`` itself).  The
target is the unique fixpoint: the edge for which every probe answers
False on itself and True toward it from each incident edge.  A search
that cannot reach or verify such a fixpoint raises OracleInconsistent.

Concurrency: single writer, no concurrent reads.  All queries,
including mark reads and ``oracle_search``, may splay and must not run
during another operation on the same forest.
"""

from __future__ import annotations

from typing import Any, Callable, Dict, Hashable, Iterable, List, NamedTuple, Optional, Tuple

Vertex = Hashable
EdgeId = Tuple[Vertex, Vertex]
EdgeOracle = Callable[[EdgeId, EdgeId, Any, Any, Any, Any], bool]

_UNSET = object()


class GrappaError(Exception):
    pass


class UnknownVertex(GrappaError):
    pass


class UnknownEdge(GrappaError):
    pass


class NotARoot(GrappaError):
    """link() requires its second argument to be a tree root."""


class SameTree(GrappaError):
    """link() endpoints already belong to one tree."""


class OracleInconsistent(GrappaError):
    """The side oracle admits no fixpoint edge."""


class _Node:
    """Splay node: a path vertex or a path edge, in alternating in-order."""

    __slots__ = ("is_edge", "vid", "eid", "lm", "rm", "plm", "prm",
                 "left", "right", "par", "rev")

    def __init__(self, is_edge: bool, vid=None, eid=None):
        self.is_edge = is_edge
        self.vid = vid
        self.eid = eid
        self.lm = None
        self.rm = None
        self.plm = _UNSET
        self.prm = _UNSET
        self.left: Optional[_Node] = None
        self.right: Optional[_Node] = None
        self.par: Optional[_Node] = None
        self.rev = False


class PathEdge(NamedTuple):
    """One edge of a preferred path, top to bottom, with current marks."""

    edge: EdgeId
    upper: Vertex
    lower: Vertex
    left: Any
    right: Any


class GrappaTree:
    """A forest of rooted trees with marked edges.

    Vertex ids are arbitrary hashables supplied by the caller; an edge
    is identified by its unordered endpoint pair (the tuple returned by
    searches keeps the order the endpoints had in ``link``).
    """

    def __init__(self) -> None:
        self._vnodes: Dict[Vertex, _Node] = {}
        self._enodes: Dict[frozenset, _Node] = {}
        self._adj: Dict[Vertex, Dict[Vertex, _Node]] = {}
        self.oracle_calls_total = 0
        self.last_search_calls = 0

    # ---------------------------------------------------------------- basics

    def vertices(self) -> List[Vertex]:
        return list(self._vnodes)

    def edges(self) -> List[EdgeId]:
        return [n.eid for n in self._enodes.values()]

    def __contains__(self, v: Vertex) -> bool:
        return v in self._vnodes

    def __len__(self) -> int:
        return len(self._vnodes)

    def make_tree(self, v: Vertex) -> None:
        if v in self._vnodes:
            raise ValueError(f"vertex {v!r} already present")
        self._vnodes[v] = _Node(False, vid=v)
        self._adj[v] = {}

    def link(self, v: Vertex, w: Vertex) -> EdgeId:
        """Attach the tree rooted at w below v; returns the new edge id."""
        nv = self._vertex(v)
        nw = self._vertex(w)
        if self._root_node(v) is self._root_node(w):
            raise SameTree(f"{v!r} and {w!r} are already connected")
        if self._root_node(w) is not nw:
            raise NotARoot(f"{w!r} is not the root of its tree")
        self._access(nv)
        self._access(nw)
        e = _Node(True, eid=(v, w))
        e.left = nv
        nv.par = e
        e.right = nw
        nw.par = e
        self._enodes[frozenset((v, w))] = e
        self._adj[v][w] = e
        self._adj[w][v] = e
        return e.eid

    def cut(self, e: Iterable[Vertex]) -> None:
        """Remove edge e; the lower endpoint becomes a root."""
        n = self._edge(e)
        self._access(n)
        upper = self._pred(n).vid
        v, w = n.eid
        lower = w if upper == v else v
        self._access(self._vnodes[lower])
        self._splay(n)
        n.left.par = None
        n.right.par = None
        n.left = None
        n.right = None
        del self._enodes[frozenset((v, w))]
        del self._adj[v][w]
        del self._adj[w][v]

    def evert(self, v: Vertex) -> None:
        """Re-root v's tree at v, swapping marks along the reversed path."""
        n = self._vertex(v)
        self._access(n)
        self._apply_rev(n)

    def root_of(self, v: Vertex) -> Vertex:
        return self._root_node(v).vid

    def parent_of(self, v: Vertex) -> Optional[Vertex]:
        n = self._vertex(v)
        self._access(n)
        if n.left is None:
            return None
        e = self._rightmost(n.left)
        a, b = e.eid
        return b if a == v else a

    # ----------------------------------------------------------------- marks

    def left_mark(self, v: Vertex, m: Any) -> None:
        """Set the left mark of every edge on the root-to-v path to m."""
        n = self._vertex(v)
        self._access(n)
        self._apply_lm(n, m)

    def right_mark(self, v: Vertex, m: Any) -> None:
        """Set the right mark of every edge on the root-to-v path to m."""
        n = self._vertex(v)
        self._access(n)
        self._apply_rm(n, m)

    def edge_marks(self, e: Iterable[Vertex]) -> Tuple[Any, Any]:
        """Current (left, right) marks of e, in root-to-leaf orientation."""
        n = self._edge(e)
        self._splay(n)
        return (n.lm, n.rm)

    # ---------------------------------------------------------------- search

    def oracle_search(self, oracle: EdgeOracle,
                      v: Optional[Vertex] = None) -> Tuple[EdgeId, Any, Any]:
        """Find the oracle's target edge; returns (edge, left, right).

        ``v`` names the tree to search (any of its vertices); it may be
        omitted when the forest holds exactly one tree.  Raises
        OracleInconsistent when the answers do not converge on a
        fixpoint edge.
        """
        if v is None:
            if not self._vnodes:
                raise UnknownVertex("empty forest")
            if len(self._vnodes) - len(self._enodes) != 1:
                raise ValueError("forest has several trees; pass a vertex")
            v = next(iter(self._vnodes))
        entry = self._vertex(v)
        self.last_search_calls = 0
        self._access(entry)
        x = entry
        skip_up = False
        while True:
            self._push(x)
            if x.is_edge:
                nxt, skip_up = self._search_edge_step(x, oracle, skip_up)
            else:
                nxt, skip_up = self._search_vertex_step(x, oracle)
            if nxt is None:
                return self._verify_fixpoint(x, oracle)
            x = nxt

    def _search_edge_step(self, x, oracle, skip_up):
        """One descent step standing on edge x; None means x is the answer."""
        pr = self._pred(x)
        if pr is None:
            # x heads its preferred path; the vertex above is its path parent
            pr = self._aux_root(x).par
        a = pr.vid
        v, w = x.eid
        b = w if a == v else v
        if not skip_up:
            f_up = self._other_edge_at(a, x)
            if f_up is not None and self._ask(oracle, x, f_up):
                # strictly above x: either up the path or off its top vertex
                if x.left is None:
                    return self._light_jump(a, oracle), True
                return x.left, False
        f_dn = self._other_edge_at(b, x)
        if f_dn is not None and self._ask(oracle, x, f_dn):
            if x.right is None:
                return self._light_jump(b, oracle), True
            return x.right, False
        return None, False

    def _search_vertex_step(self, y, oracle):
        """One descent step standing on path vertex y."""
        up_e = self._rightmost(y.left) if y.left is not None else None
        dn_e = self._leftmost(y.right) if y.right is not None else None
        if up_e is not None:
            other = self._other_edge_at(y.vid, up_e)
            if other is None:
                # y's only edge is the one above it: nothing hangs below
                return y.left, False
            if not self._ask(oracle, up_e, other):
                return y.left, False
        if dn_e is not None:
            other = self._other_edge_at(y.vid, dn_e)
            if other is None:
                return y.right, False
            if not self._ask(oracle, dn_e, other):
                return y.right, False
        return self._light_jump(y.vid, oracle), True

    def _light_jump(self, vid, oracle):
        """Enter the off-path subtree of vid that the oracle points into."""
        y = self._vnodes[vid]
        yroot = self._aux_root(y)
        ref = None
        cands = []
        for en in self._adj[vid].values():
            if self._aux_root(en) is yroot:
                ref = en
            else:
                cands.append(en)
        for en in cands:
            probe = ref or self._other_edge_at(vid, en)
            if probe is None or not self._ask(oracle, en, probe):
                self._splay(en)
                return en
        raise OracleInconsistent(
            f"no subtree at {vid!r} can contain the target")

    def _verify_fixpoint(self, x, oracle):
        for vid in x.eid:
            for en in list(self._adj[vid].values()):
                if en is x:
                    continue
                if self._ask(oracle, x, en):
                    raise OracleInconsistent(
                        f"candidate {x.eid!r} rejected by its own probe")
                if not self._ask(oracle, en, x):
                    raise OracleInconsistent(
                        f"neighbour of {x.eid!r} does not point back at it")
        self._splay(x)
        return (x.eid, x.lm, x.rm)

    def _ask(self, oracle, f, f2) -> bool:
        self._refresh(f)
        self._refresh(f2)
        self.oracle_calls_total += 1
        self.last_search_calls += 1
        return bool(oracle(f.eid, f2.eid, f.lm, f.rm, f2.lm, f2.rm))

    def _other_edge_at(self, vid, exclude):
        for en in self._adj[vid].values():
            if en is not exclude:
                return en
        return None

    # ------------------------------------------------- heavy-path exposure

    def path_root(self, v: Vertex) -> Vertex:
        """Top vertex of the preferred path currently containing v."""
        n = self._vertex(v)
        return self._leftmost(self._aux_root_pushed(n)).vid

    def preferred_path(self, v: Vertex) -> Tuple[List[Vertex], List[PathEdge]]:
        """The preferred path through v, top to bottom.

        Returns (vertices, edges); edges[i] joins vertices[i] to
        vertices[i+1] and carries its current marks.  Reading does not
        change which paths are preferred.
        """
        n = self._vertex(v)
        order: List[_Node] = []
        self._inorder(self._aux_root_pushed(n), order)
        verts = [nd.vid for nd in order if not nd.is_edge]
        edges = []
        at = 0
        for nd in order:
            if nd.is_edge:
                edges.append(PathEdge(nd.eid, verts[at], verts[at + 1],
                                      nd.lm, nd.rm))
                at += 1
        return verts, edges

    def _inorder(self, n, out):
        stack = []
        while stack or n is not None:
            while n is not None:
                self._push(n)
                stack.append(n)
                n = n.left
            n = stack.pop()
            out.append(n)
            n = n.right

    # ------------------------------------------------------------- internals

    def _vertex(self, v) -> _Node:
        try:
            return self._vnodes[v]
        except KeyError:
            raise UnknownVertex(repr(v)) from None

    def _edge(self, e) -> _Node:
        try:
            u, w = e
        except (TypeError, ValueError):
            raise UnknownEdge(repr(e)) from None
        try:
            return self._enodes[frozenset((u, w))]
        except KeyError:
            raise UnknownEdge(repr(e)) from None

    def _root_node(self, v) -> _Node:
        n = self._vertex(v)
        self._access(n)
        top = self._leftmost(n)
        self._splay(top)
        return top

    @staticmethod
    def _apply_rev(n: _Node) -> None:
        n.left, n.right = n.right, n.left
        n.rev = not n.rev
        n.lm, n.rm = n.rm, n.lm
        n.plm, n.prm = n.prm, n.plm

    @staticmethod
    def _apply_lm(n: _Node, m) -> None:
        if n.is_edge:
            n.lm = m
        n.plm = m

    @staticmethod
    def _apply_rm(n: _Node, m) -> None:
        if n.is_edge:
            n.rm = m
        n.prm = m

    def _push(self, n: _Node) -> None:
        if n.rev:
            for c in (n.left, n.right):
                if c is not None:
                    self._apply_rev(c)
            n.rev = False
        if n.plm is not _UNSET:
            for c in (n.left, n.right):
                if c is not None:
                    self._apply_lm(c, n.plm)
            n.plm = _UNSET
        if n.prm is not _UNSET:
            for c in (n.left, n.right):
                if c is not None:
                    self._apply_rm(c, n.prm)
            n.prm = _UNSET

    @staticmethod
    def _is_aux_root(n: _Node) -> bool:
        p = n.par
        return p is None or (p.left is not n and p.right is not n)

    def _aux_root(self, n: _Node) -> _Node:
        while not self._is_aux_root(n):
            n = n.par
        return n

    def _aux_root_pushed(self, n: _Node) -> _Node:
        # climb first, then push top-down so pointer tests stay valid
        chain = [n]
        while not self._is_aux_root(chain[-1]):
            chain.append(chain[-1].par)
        for nd in reversed(chain):
            self._push(nd)
        return chain[-1]

    def _refresh(self, n: _Node) -> None:
        self._aux_root_pushed(n)

    def _rightmost(self, n: _Node) -> _Node:
        self._push(n)
        while n.right is not None:
            n = n.right
            self._push(n)
        return n

    def _leftmost(self, n: _Node) -> _Node:
        self._push(n)
        while n.left is not None:
            n = n.left
            self._push(n)
        return n

    def _pred(self, n: _Node) -> Optional[_Node]:
        # in-order predecessor across the whole aux tree; ancestors must
        # already be pushed (true along any access or search descent)
        self._push(n)
        if n.left is not None:
            return self._rightmost(n.left)
        c = n
        while not self._is_aux_root(c):
            p = c.par
            if c is p.right:
                return p
            c = p
        return None

    def _rotate(self, x: _Node) -> None:
        p = x.par
        g = p.par
        if p.left is x:
            p.left = x.right
            if x.right is not None:
                x.right.par = p
            x.right = p
        else:
            p.right = x.left
            if x.left is not None:
                x.left.par = p
            x.left = p
        was_root = self._is_aux_root(p)
        p.par = x
        x.par = g
        if not was_root:
            if g.left is p:
                g.left = x
            else:
                g.right = x

    def _splay(self, x: _Node) -> None:
        self._aux_root_pushed(x)
        while not self._is_aux_root(x):
            p = x.par
            if self._is_aux_root(p):
                self._rotate(x)
            elif (p.par.left is p) == (p.left is x):
                self._rotate(p)
                self._rotate(x)
            else:
                self._rotate(x)
                self._rotate(x)

    def _access(self, n: _Node) -> None:
        self._splay(n)
        if n.right is not None:
            n.right = None  # demoted child keeps n as its path parent
        while n.par is not None:
            y = n.par
            self._splay(y)
            y.right = n
            self._splay(n)
