"""Planar primitives: points, open discs, circular sectors, directions.

All predicates follow open-set semantics: a point exactly on a boundary
circle is outside the open disc/sector, and a ray tangent to a circle does
not hit the open disc.  Containment and disjointness comparisons are done
on squared distances wherever possible so no square root is taken at a
decision boundary.  Everything here is a pure function over immutable
values and safe to call from any number of threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

Vec = tuple[float, float]

UNIT_NORM_TOL = 1e-12


def _require_finite(value: float, name: str) -> None:
    if not math.isfinite(value):
        raise ValueError(f"{name} must be finite, got {value!r}")


@dataclass(frozen=True)
class Point:
    """A location in the plane. Coordinates must be finite."""

    x: float
    y: float

    def __post_init__(self) -> None:
        _require_finite(self.x, "x")
        _require_finite(self.y, "y")


@dataclass(frozen=True)
class Disc:
    """An open disc; closed variants are selected by flag at query time."""

    center: Point
    radius: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.radius) and self.radius > 0.0):
            raise ValueError(f"radius must be positive and finite, got {self.radius!r}")


@dataclass(frozen=True)
class UnitDirection:
    """A unit vector; the norm must be 1 within UNIT_NORM_TOL (on the square)."""

    ux: float
    uy: float

    def __post_init__(self) -> None:
        _require_finite(self.ux, "ux")
        _require_finite(self.uy, "uy")
        n2 = self.ux * self.ux + self.uy * self.uy
        if abs(n2 - 1.0) > UNIT_NORM_TOL:
            raise ValueError(f"direction ({self.ux}, {self.uy}) is not unit length")

    @staticmethod
    def from_angle(theta: float) -> "UnitDirection":
        return UnitDirection(math.cos(theta), math.sin(theta))

    @staticmethod
    def of(vx: float, vy: float) -> "UnitDirection":
        """Normalize an arbitrary nonzero vector."""
        n = math.hypot(vx, vy)
        if n == 0.0:
            raise ValueError("cannot normalize the zero vector")
        return UnitDirection(vx / n, vy / n)


@dataclass(frozen=True)
class Sector:
    """Open circular sector: points within `radius` of the vertex whose unit
    direction from the vertex differs from `axis` by less than `opening`
    (chord distance on the unit circle, so opening lies in (0, 2])."""

    vertex: Point
    axis: UnitDirection
    opening: float
    radius: float

    def __post_init__(self) -> None:
        if not (0.0 < self.opening <= 2.0):
            raise ValueError(f"opening must lie in (0, 2], got {self.opening!r}")
        if not (math.isfinite(self.radius) and self.radius > 0.0):
            raise ValueError(f"radius must be positive and finite, got {self.radius!r}")


def dist_sq(p: Point, q: Point) -> float:
    dx = p.x - q.x
    dy = p.y - q.y
    return dx * dx + dy * dy


def dist(p: Point, q: Point) -> float:
    return math.hypot(p.x - q.x, p.y - q.y)


def disc_contains(d: Disc, p: Point, closed: bool = False) -> bool:
    """Membership in the open disc, or in its closure when `closed`."""
    d2 = dist_sq(p, d.center)
    r2 = d.radius * d.radius
    return d2 <= r2 if closed else d2 < r2


def disc_gap(a: Disc, b: Disc) -> float:
    """Signed separation of two discs: center distance minus both radii.

    Positive iff the closures are disjoint, zero at exterior tangency,
    negative on overlap.  The radii are summed before subtracting so the
    result is bitwise symmetric in the arguments.
    """
    return dist(a.center, b.center) - (a.radius + b.radius)


def subtended_angle(d: Disc, p: Point) -> float:
    """Angular width of the disc seen from an exterior point, in radians.

    Requires p strictly outside the closure of d.  Equals
    2*arcsin(radius/dist) and is always strictly below pi*radius/dist.
    """
    d2 = dist_sq(p, d.center)
    r2 = d.radius * d.radius
    if d2 <= r2:
        raise ValueError("viewpoint must be strictly outside the disc closure")
    return 2.0 * math.asin(d.radius / math.sqrt(d2))


def unit_diff(u: Vec, v: Vec) -> float:
    """Norm of the difference of the normalizations of two nonzero vectors.

    Always at most (2/||v||)*||u - v||.
    """
    nu = math.hypot(u[0], u[1])
    nv = math.hypot(v[0], v[1])
    if nu == 0.0 or nv == 0.0:
        raise ValueError("unit_diff requires nonzero vectors")
    return math.hypot(u[0] / nu - v[0] / nv, u[1] / nu - v[1] / nv)


def sector_contains(s: Sector, p: Point) -> bool:
    """Open-sector membership; the vertex itself is excluded."""
    dx = p.x - s.vertex.x
    dy = p.y - s.vertex.y
    d2 = dx * dx + dy * dy
    if d2 == 0.0 or d2 >= s.radius * s.radius:
        return False
    return unit_diff((dx, dy), (s.axis.ux, s.axis.uy)) < s.opening


def ray_hits_disc(origin: Point, direction: UnitDirection, d: Disc) -> bool:
    """Whether {origin + t*direction : t > 0} meets the OPEN disc.

    Tangent rays and rays grazing the boundary miss: the intersection with
    the open disc must be nonempty.  An origin inside the open disc always
    hits; an origin on the boundary hits iff the direction points strictly
    into the chord cone (positive projection toward the center).
    """
    wx = d.center.x - origin.x
    wy = d.center.y - origin.y
    w2 = wx * wx + wy * wy
    r2 = d.radius * d.radius
    if w2 < r2:
        return True
    t = wx * direction.ux + wy * direction.uy
    if w2 == r2:
        # Boundary origin: open points exist along the ray iff t > 0.
        return t > 0.0
    if t <= 0.0:
        return False
    return w2 - t * t < r2
