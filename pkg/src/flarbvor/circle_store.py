"""Dynamic sets of definer circles answering point-containment queries.

Two interchangeable backends sit behind ``make``:

* ``ScanStore`` tests every stored circle exactly, in insertion order.
  It is the correctness reference and is plenty fast for audits.
* ``LiftStore`` maps each circle to the plane produced by
  ``DefinerCircle.lift`` and keeps the planes in a few static float
  blocks (logarithmic rebuild schedule, tombstoned removals).  A query
  evaluates all planes against the lifted query point with numpy,
  keeps the near-maximal ones within a conservative error margin, and
  confirms candidates with exact arithmetic, falling back to a full
  exact scan if floats and rationals ever disagree.  Queries therefore
  stay exact; only the *speed* is heuristic.  No polylogarithmic
  update bound is claimed: rebuild work is proportional to the block
  sizes touched, which the stats counters expose for measurement.

Both backends return the live containing circle with the smallest
insertion sequence number, so their answers are interchangeable.
"""

from __future__ import annotations

from typing import Dict, Iterator, List, Optional, Tuple

import numpy as np

from .predicates import DefinerCircle, Site


class CircleStoreError(Exception):
    pass


class DuplicateId(CircleStoreError):
    pass


class UnknownId(CircleStoreError):
    pass


class ScanStore:
    """Reference backend: exact linear scan."""

    def __init__(self) -> None:
        self._circles: Dict[object, DefinerCircle] = {}

    def __len__(self) -> int:
        return len(self._circles)

    def __contains__(self, cid) -> bool:
        return cid in self._circles

    def items(self) -> Iterator[Tuple[object, DefinerCircle]]:
        return iter(self._circles.items())

    def insert(self, cid, circle: DefinerCircle) -> None:
        if cid in self._circles:
            raise DuplicateId(repr(cid))
        self._circles[cid] = circle

    def remove(self, cid) -> None:
        if cid not in self._circles:
            raise UnknownId(repr(cid))
        del self._circles[cid]

    def find_containing(self, q: Site) -> Optional[Tuple[object, DefinerCircle]]:
        for cid, circle in self._circles.items():
            if circle.contains(q):
                return cid, circle
        return None

    def all_containing(self, q: Site) -> List[Tuple[object, DefinerCircle]]:
        return [(cid, c) for cid, c in self._circles.items() if c.contains(q)]


class _Block:
    __slots__ = ("ids", "planes", "live")

    def __init__(self, ids, planes):
        self.ids = ids                      # list of circle ids
        self.planes = planes                # (k, 3) float64 [p, r, s]
        self.live = np.ones(len(ids), bool)


class LiftStore:
    """Sublinear backend over the paraboloid lift."""

    # float slack below which a plane is still considered a candidate;
    # scaled by the magnitude of the terms involved, then checked exactly
    _REL_MARGIN = 1e-9

    def __init__(self) -> None:
        self._circles: Dict[object, DefinerCircle] = {}
        self._seq: Dict[object, int] = {}
        self._next_seq = 0
        self._blocks: List[_Block] = []
        self._where: Dict[object, Tuple[_Block, int]] = {}
        self._dead = 0
        self.stats = {"rebuilt_rows": 0, "exact_checks": 0, "fallback_scans": 0}

    def __len__(self) -> int:
        return len(self._circles)

    def __contains__(self, cid) -> bool:
        return cid in self._circles

    def items(self) -> Iterator[Tuple[object, DefinerCircle]]:
        return iter(self._circles.items())

    def insert(self, cid, circle: DefinerCircle) -> None:
        if cid in self._circles:
            raise DuplicateId(repr(cid))
        self._circles[cid] = circle
        self._seq[cid] = self._next_seq
        self._next_seq += 1
        p, r, s = circle.lift()
        block = _Block([cid], np.array([[float(p), float(r), float(s)]]))
        self._blocks.append(block)
        self._where[cid] = (block, 0)
        while len(self._blocks) >= 2 and len(self._blocks[-1].ids) >= len(self._blocks[-2].ids):
            self._merge_last_two()

    def remove(self, cid) -> None:
        if cid not in self._circles:
            raise UnknownId(repr(cid))
        block, row = self._where.pop(cid)
        block.live[row] = False
        del self._circles[cid]
        del self._seq[cid]
        self._dead += 1
        if self._dead > max(8, len(self._circles)):
            self._rebuild_all()

    def find_containing(self, q: Site) -> Optional[Tuple[object, DefinerCircle]]:
        if not self._circles:
            return None
        qx, qy = float(q.x), float(q.y)
        qz = qx * qx + qy * qy
        vec = np.array([qx, qy, 1.0])
        avec = np.array([abs(qx), abs(qy), 1.0])
        candidates = []
        for block in self._blocks:
            if not block.live.any():
                continue
            heights = block.planes @ vec
            slack = self._REL_MARGIN * (np.abs(block.planes) @ avec + qz + 1.0)
            hot = block.live & (heights + slack >= qz)
            for row in np.flatnonzero(hot):
                candidates.append(block.ids[row])
        candidates.sort(key=self._seq.__getitem__)
        for cid in candidates:
            self.stats["exact_checks"] += 1
            if self._circles[cid].contains(q):
                return cid, self._circles[cid]
        if candidates:
            # floats nominated candidates but all failed exactly: distrust
            # the margin entirely for this query
            self.stats["fallback_scans"] += 1
            for cid, circle in sorted(self._circles.items(), key=lambda kv: self._seq[kv[0]]):
                if circle.contains(q):
                    return cid, circle
        return None

    def all_containing(self, q: Site) -> List[Tuple[object, DefinerCircle]]:
        live = sorted(self._circles.items(), key=lambda kv: self._seq[kv[0]])
        return [(cid, c) for cid, c in live if c.contains(q)]

    def _merge_last_two(self) -> None:
        b2 = self._blocks.pop()
        b1 = self._blocks.pop()
        ids = []
        rows = []
        for b in (b1, b2):
            for i, cid in enumerate(b.ids):
                if b.live[i]:
                    ids.append(cid)
                    rows.append(b.planes[i])
        self._dead -= (len(b1.ids) - int(b1.live.sum())) + (len(b2.ids) - int(b2.live.sum()))
        merged = _Block(ids, np.array(rows).reshape(len(ids), 3))
        self._blocks.append(merged)
        for i, cid in enumerate(ids):
            self._where[cid] = (merged, i)
        self.stats["rebuilt_rows"] += len(ids)

    def _rebuild_all(self) -> None:
        ids = sorted(self._circles, key=self._seq.__getitem__)
        rows = np.empty((len(ids), 3))
        for i, cid in enumerate(ids):
            p, r, s = self._circles[cid].lift()
            rows[i] = (float(p), float(r), float(s))
        block = _Block(ids, rows)
        self._blocks = [block] if ids else []
        self._where = {cid: (block, i) for i, cid in enumerate(ids)}
        self._dead = 0
        self.stats["rebuilt_rows"] += len(ids)


def make(backend: str = "scan"):
    """Create a store: backend is ``scan`` or ``sublinear``."""
    if backend == "scan":
        return ScanStore()
    if backend == "sublinear":
        return LiftStore()
    raise ValueError(f"unknown circle store backend {backend!r}")


def drain(store, q: Site) -> List[Tuple[object, DefinerCircle]]:
    """Exhaustion loop: pop containing circles until none is left.

    Returns every stored circle strictly containing q, as a list in
    the order removed.  The circles stay removed; callers decide what
    to reinsert.
    """
    out = []
    while True:
        hit = store.find_containing(q)
        if hit is None:
            return out
        store.remove(hit[0])
        out.append(hit)
