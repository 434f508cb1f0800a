"""Exact geometric predicates over rational coordinates.

All predicates are decided with integer / Fraction arithmetic only, so
there is no epsilon tuning anywhere: a point is inside, on, or outside,
full stop.  Coordinates may be ints or Fractions (mixing is fine).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Sequence, Tuple


class PredicateError(Exception):
    pass


class CollinearDefiners(PredicateError):
    """Three circle definers lie on a common line."""


class NotInConvexPosition(PredicateError):
    """Adding the query point would break strict convex position."""


class DuplicateSite(PredicateError):
    """The query point coincides with an existing site."""


LEFT = 1
RIGHT = -1
COLLINEAR = 0

INSIDE = 1
ON = 0
OUTSIDE = -1


class Site(NamedTuple):
    x: Fraction
    y: Fraction

    @staticmethod
    def of(x, y) -> "Site":
        return Site(Fraction(x), Fraction(y))

    def __repr__(self):
        return f"Site({self.x}, {self.y})"


def parse_site(text: str) -> Site:
    """Parse one CSV record ``x_num/x_den,y_num/y_den`` (denominator optional)."""
    try:
        xs, ys = text.strip().split(",")
        return Site(Fraction(xs), Fraction(ys))
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"bad site record: {text!r}") from exc


def format_site(s: Site) -> str:
    def fmt(v: Fraction) -> str:
        v = Fraction(v)
        return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"

    return f"{fmt(s.x)},{fmt(s.y)}"


def _sign(v) -> int:
    return (v > 0) - (v < 0)


def orientation(a: Site, b: Site, c: Site) -> int:
    """Orientation of the ordered triple: LEFT (+1) when c lies to the left
    of the directed line a->b, RIGHT (-1) to the right, COLLINEAR (0) on it."""
    return _sign((b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x))


def in_circle(a: Site, b: Site, c: Site, q: Site) -> int:
    """Position of q relative to the circle through a, b, c.

    Returns INSIDE (+1), ON (0) or OUTSIDE (-1), independent of the
    orientation in which the definers are listed.  Raises
    CollinearDefiners when a, b, c do not define a circle.
    """
    o = orientation(a, b, c)
    if o == 0:
        raise CollinearDefiners(f"{a}, {b}, {c}")
    ax, ay = a.x - q.x, a.y - q.y
    bx, by = b.x - q.x, b.y - q.y
    cx, cy = c.x - q.x, c.y - q.y
    det = (
        (ax * ax + ay * ay) * (bx * cy - by * cx)
        - (bx * bx + by * by) * (ax * cy - ay * cx)
        + (cx * cx + cy * cy) * (ax * by - ay * bx)
    )
    return _sign(det) * o


def circumcenter(a: Site, b: Site, c: Site) -> Site:
    """Exact circumcenter of the triangle a, b, c."""
    d = 2 * ((b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x))
    if d == 0:
        raise CollinearDefiners(f"{a}, {b}, {c}")
    a2 = a.x * a.x + a.y * a.y
    b2 = b.x * b.x + b.y * b.y
    c2 = c.x * c.x + c.y * c.y
    ux = Fraction(a2 * (b.y - c.y) + b2 * (c.y - a.y) + c2 * (a.y - b.y), d)
    uy = Fraction(a2 * (c.x - b.x) + b2 * (a.x - c.x) + c2 * (b.x - a.x), d)
    return Site(ux, uy)


def circumradius2(a: Site, b: Site, c: Site) -> Fraction:
    """Squared circumradius of the triangle a, b, c."""
    o = circumcenter(a, b, c)
    return (a.x - o.x) ** 2 + (a.y - o.y) ** 2


def dist2(p: Site, q: Site) -> Fraction:
    return (p.x - q.x) ** 2 + (p.y - q.y) ** 2


@dataclass(frozen=True)
class DefinerCircle:
    """Circumcircle of three non-collinear sites, represented exactly.

    ``definers`` keeps the three sites in the order given; ``center``
    and squared radius ``r2`` are derived rationals, so containment
    tests are exact comparisons, never distance computations in floats.
    """

    definers: Tuple[Site, Site, Site]
    center: Site
    r2: Fraction

    @staticmethod
    def of(a: Site, b: Site, c: Site) -> "DefinerCircle":
        o = circumcenter(a, b, c)
        return DefinerCircle((a, b, c), o, dist2(a, o))

    def side(self, q: Site) -> int:
        return _sign(self.r2 - dist2(q, self.center))

    def contains(self, q: Site) -> bool:
        """True when q lies strictly inside the circle."""
        return dist2(q, self.center) < self.r2

    def lift(self) -> Tuple[Fraction, Fraction, Fraction]:
        """Coefficients (p, r, s) of the lifted plane.

        q lies strictly inside the circle exactly when
        p*q.x + r*q.y + s > q.x**2 + q.y**2, which turns "find a circle
        containing q" into an upper-envelope query over planes.
        """
        cx, cy = self.center
        return (2 * cx, 2 * cy, self.r2 - cx * cx - cy * cy)


def convex_position_insertable(hull: Sequence[Site], q: Site):
    """Check that q can join the strictly convex polygon ``hull``.

    ``hull`` lists the current sites in counterclockwise order.  On
    success returns the pair (pred, succ) of hull neighbours between
    which q has to be spliced (q sees exactly the hull edge pred->succ
    from outside).  Raises DuplicateSite for a repeated point and
    NotInConvexPosition when q is inside the hull, on its boundary, or
    collinear with a hull edge.
    """
    n = len(hull)
    for s in hull:
        if s == q:
            raise DuplicateSite(repr(q))
    if n == 0:
        raise ValueError("empty hull")
    if n == 1:
        return hull[0], hull[0]
    if n == 2:
        a, b = hull
        if orientation(a, b, q) == COLLINEAR:
            raise NotInConvexPosition(f"{q} collinear with {a}, {b}")
        # a 2-gon has two sides; q always sees exactly one of them
        if orientation(a, b, q) == RIGHT:
            return a, b
        return b, a

    seen = []
    for i in range(n):
        a, b = hull[i], hull[(i + 1) % n]
        o = orientation(a, b, q)
        if o == COLLINEAR:
            raise NotInConvexPosition(f"{q} collinear with hull edge {a}->{b}")
        if o == RIGHT:
            seen.append(i)
    if len(seen) != 1:
        raise NotInConvexPosition(
            f"{q} sees {len(seen)} hull edges (needs exactly 1)"
        )
    i = seen[0]
    return hull[i], hull[(i + 1) % n]


def parabola_sites(n: int, *, descending: bool = False) -> list[Site]:
    """n integer sites on the parabola y = x^2, x = 1..n.

    Any four such points are never cocircular and no three are ever
    collinear, so every prefix is in strictly convex and general
    position.  With descending=True the x values are listed largest
    first, which makes each point's hull neighbours maximally lopsided
    when inserted in order.
    """
    xs = range(n, 0, -1) if descending else range(1, n + 1)
    return [Site(Fraction(x), Fraction(x * x)) for x in xs]
