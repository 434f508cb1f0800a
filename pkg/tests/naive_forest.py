"""Plain pointer-forest reference for checking GrappaTree behaviour.

Every operation walks explicit parent pointers, so each one is O(path
length) and obviously correct.  Mark pairs are stored per edge in
root-to-leaf orientation and swapped by hand during evert.
"""

from flarbvor.grappa_tree import (
    NotARoot,
    OracleInconsistent,
    SameTree,
    UnknownEdge,
    UnknownVertex,
)


class NaiveForest:
    def __init__(self):
        self.parent = {}
        self.eids = {}   # frozenset endpoint pair -> (v, w) as linked
        self.marks = {}  # frozenset endpoint pair -> [left, right]
        self.adj = {}

    def _check(self, v):
        if v not in self.parent:
            raise UnknownVertex(repr(v))

    def _ekey(self, e):
        key = frozenset(e)
        if key not in self.eids:
            raise UnknownEdge(repr(e))
        return key

    def make_tree(self, v):
        if v in self.parent:
            raise ValueError(f"vertex {v!r} already present")
        self.parent[v] = None
        self.adj[v] = []

    def root_of(self, v):
        self._check(v)
        while self.parent[v] is not None:
            v = self.parent[v]
        return v

    def parent_of(self, v):
        self._check(v)
        return self.parent[v]

    def link(self, v, w):
        self._check(v)
        self._check(w)
        if self.root_of(v) == self.root_of(w):
            raise SameTree(f"{v!r} and {w!r} are already connected")
        if self.parent[w] is not None:
            raise NotARoot(f"{w!r} is not the root of its tree")
        self.parent[w] = v
        key = frozenset((v, w))
        self.eids[key] = (v, w)
        self.marks[key] = [None, None]
        self.adj[v].append(w)
        self.adj[w].append(v)
        return (v, w)

    def cut(self, e):
        key = self._ekey(e)
        v, w = self.eids[key]
        child = w if self.parent.get(w) == v else v
        self.parent[child] = None
        del self.eids[key]
        del self.marks[key]
        self.adj[v].remove(w)
        self.adj[w].remove(v)

    def evert(self, v):
        self._check(v)
        prev = None
        cur = v
        while cur is not None:
            nxt = self.parent[cur]
            self.parent[cur] = prev
            if nxt is not None:
                m = self.marks[frozenset((cur, nxt))]
                m[0], m[1] = m[1], m[0]
            prev, cur = cur, nxt

    def left_mark(self, v, m):
        self._paint(v, m, 0)

    def right_mark(self, v, m):
        self._paint(v, m, 1)

    def _paint(self, v, m, side):
        self._check(v)
        cur = v
        while self.parent[cur] is not None:
            p = self.parent[cur]
            self.marks[frozenset((cur, p))][side] = m
            cur = p

    def edge_marks(self, e):
        return tuple(self.marks[self._ekey(e)])

    def oracle_search(self, oracle, v=None):
        root = self.root_of(v) if v is not None else None
        for key, eid in self.eids.items():
            if root is not None and self.root_of(eid[0]) != root:
                continue
            if self._is_fixpoint(oracle, eid):
                lm, rm = self.marks[key]
                return (eid, lm, rm)
        raise OracleInconsistent("no edge satisfies every probe")

    def _is_fixpoint(self, oracle, eid):
        key = frozenset(eid)
        lm, rm = self.marks[key]
        for u in eid:
            for nbr in self.adj[u]:
                k2 = frozenset((u, nbr))
                if k2 == key:
                    continue
                eid2 = self.eids[k2]
                lm2, rm2 = self.marks[k2]
                if oracle(eid, eid2, lm, rm, lm2, rm2):
                    return False
                if not oracle(eid2, eid, lm2, rm2, lm, rm):
                    return False
        return True


def ancestor_oracle(forest, target):
    """A truthful side oracle for ``target`` built from forest topology.

    Answers whether the target edge lies in the component of the forest
    minus ``f`` that contains ``f2``, by flood fill over the naive
    adjacency.
    """
    target_key = frozenset(target)

    def oracle(f, f2, lm, rm, lm2, rm2):
        fkey = frozenset(f)
        if fkey == target_key:
            return False
        seen = set(f2)
        frontier = list(f2)
        while frontier:
            u = frontier.pop()
            for nbr in forest.adj[u]:
                if frozenset((u, nbr)) == fkey or nbr in seen:
                    continue
                seen.add(nbr)
                frontier.append(nbr)
        return target[0] in seen and target[1] in seen

    return oracle
