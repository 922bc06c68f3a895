"""Inductive disc packing of an open region.

Given a region (the whole plane or an open disc), a deterministic dense
sequence of points is enumerated on dyadic grids: at level L = 0, 1, 2, ...
the grid points (a*2^-L, b*2^-L) inside the window [-2^L, 2^L]^2 are visited
in lexicographic (x, then y) order, points already emitted at an earlier
level are skipped, and the result is filtered to the open region.  Discs are
then packed inductively: the first disc is centered at the first dense point
with radius min{1/4, diam/8} capped by half the distance to the region
complement; each later disc is centered at the earliest dense point outside
the closure of everything packed so far, with radius

    min{ min{1, diam/2} / 4^(k+1),  (free space around the center) / 2 }

so radii decay at least geometrically and closures never touch.  Stored
radii are multiplied by a safety shrink of (1 - 2^-20) to keep the strict
disjointness and containment inequalities valid under double rounding.

Double precision bounds how far the construction can go: a packing whose
dyadic radius term underflows, or whose region holds no further representable
points, stops early and is marked exhausted.  Everything is deterministic;
rebuilding with the same arguments is bit-identical.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import islice
from typing import Iterator, Union

from .geometry import Disc, Point, dist, dist_sq

SAFETY_SHRINK = 1.0 - 2.0 ** -20

# Hard cap on dense candidates examined in a single center scan.
SCAN_CANDIDATE_CAP = 10_000_000

# Integer slack added to per-level grid ranges so float rounding of the range
# endpoints can never drop a candidate; the exact membership filter rejects
# the extras.
_RANGE_PAD = 10


class EnumerationCapExceeded(RuntimeError):
    """A dense-point scan examined more candidates than the configured cap."""


class RegionExhausted(Exception):
    """The region holds no further representable points to pack."""


class _Plane:
    """The whole plane as a packing region (singleton ``PLANE``)."""

    __slots__ = ()

    def __repr__(self) -> str:
        return "PLANE"


PLANE = _Plane()


@dataclass(frozen=True)
class DiscRegion:
    """An open disc as a packing region."""

    disc: Disc


Region = Union[_Plane, DiscRegion]


def region_diameter(region: Region) -> float:
    return math.inf if isinstance(region, _Plane) else 2.0 * region.disc.radius


def region_contains(region: Region, p: Point) -> bool:
    if isinstance(region, _Plane):
        return True
    return dist_sq(p, region.disc.center) < region.disc.radius ** 2


def dist_to_region_complement(region: Region, p: Point) -> float:
    """Distance from an interior point to the complement of the region.

    Positive infinity for the plane (empty complement).  Raises if the point
    is not strictly inside the region.
    """
    if isinstance(region, _Plane):
        return math.inf
    d = dist(p, region.disc.center)
    if d >= region.disc.radius:
        raise ValueError(f"point ({p.x}, {p.y}) lies outside the region")
    return region.disc.radius - d


@dataclass(frozen=True)
class PackedDisc:
    """One disc of a packing with its dense-sequence index and position."""

    disc: Disc
    seq_index: int
    level_index: int


@dataclass(frozen=True)
class PackingSystem:
    """A finite prefix of the packing of a region, in construction order."""

    region: Region
    discs: tuple[PackedDisc, ...]
    enumeration_cursor: int
    exhausted: bool = False


@dataclass(frozen=True)
class EnlargedSystem:
    """Closed discs with the i-th radius scaled by 2^i (1-based)."""

    discs: tuple[Disc, ...]


def _floor_scaled(v: float, level: int) -> int:
    """Exact floor(v * 2^level) for a finite double v."""
    num, den = v.as_integer_ratio()
    return (num << level) // den


def _ceil_scaled(v: float, level: int) -> int:
    num, den = v.as_integer_ratio()
    return -((-num << level) // den)


def _grid_coord(a: int, level: int) -> float:
    """a * 2^-level correctly rounded to a double, for arbitrarily large a."""
    if a < 0:
        return -_grid_coord(-a, level)
    n = a.bit_length()
    if n <= 970:  # float(int) is correctly rounded and cannot overflow here
        return math.ldexp(float(a), -level)
    # Round to 56 bits with a sticky low bit first so the final rounding in
    # float() cannot be skewed by truncated tail bits.
    shift = n - 56
    hi = a >> shift
    if a & ((1 << shift) - 1):
        hi |= 1
    return math.ldexp(float(hi), shift - level)


def _exhaust_level(region: DiscRegion) -> int:
    """Dyadic level past which the region can contain no unseen doubles.

    Once the grid step falls well below the smallest coordinate ulp in the
    region (and the window covers the region), every representable point of
    the region is the rounding of some grid point of that level, so deeper
    levels add nothing.  The ulp at the largest magnitude is used with one
    extra level of slack for ranges that straddle a binade boundary; ranges
    hugging zero would need astronomically deep grids and are cut off here,
    which only truncates the packing earlier.
    """
    c = region.disc.center
    r = region.disc.radius
    span = max(abs(c.x) + r, abs(c.y) + r)
    window_level = 0
    while math.ldexp(1.0, window_level) < span:
        window_level += 1
    # Smallest L with 2^-L <= ulp(span)/16.
    _, exp = math.frexp(math.ulp(span))
    return max(window_level, 5 - exp, 0)


def dense_points(region: Region) -> Iterator[Point]:
    """Yield the canonical dense sequence of the region, first point first.

    Finite for disc regions once the grid outresolves double precision;
    infinite for the plane.
    """
    if isinstance(region, _Plane):
        yield from _dense_points_plane()
    else:
        yield from _dense_points_disc(region)


def _dense_points_plane() -> Iterator[Point]:
    level = 0
    while True:
        step = math.ldexp(1.0, -level)
        bound = 4 ** level
        prev_bound = bound // 2
        for a in range(-bound, bound + 1):
            x = a * step
            for b in range(-bound, bound + 1):
                if (
                    level > 0
                    and a % 2 == 0
                    and b % 2 == 0
                    and abs(a) <= prev_bound
                    and abs(b) <= prev_bound
                ):
                    continue  # emitted at the previous level
                yield Point(x, b * step)
        level += 1


def _dense_points_disc(region: DiscRegion) -> Iterator[Point]:
    cx = region.disc.center.x
    cy = region.disc.center.y
    r = region.disc.radius
    r2 = r * r
    stop_level = _exhaust_level(region)
    seen: set[tuple[float, float]] = set()
    raw = 0  # grid candidates examined, filtered or not
    for level in range(stop_level + 1):
        bound = 4 ** level
        a_lo = max(_floor_scaled(cx - r, level) - _RANGE_PAD, -bound)
        a_hi = min(_ceil_scaled(cx + r, level) + _RANGE_PAD, bound)
        raw += max(0, a_hi - a_lo + 1)
        if raw > 5 * SCAN_CANDIDATE_CAP:
            raise EnumerationCapExceeded(
                "grid ranges for the region grew past the raw candidate budget"
            )
        for a in range(a_lo, a_hi + 1):
            x = _grid_coord(a, level)
            ddx = x - cx
            rem = r2 - ddx * ddx
            if rem <= 0.0:
                continue
            half = math.sqrt(rem)
            b_lo = max(_floor_scaled(cy - half, level) - _RANGE_PAD, -bound)
            b_hi = min(_ceil_scaled(cy + half, level) + _RANGE_PAD, bound)
            raw += max(0, b_hi - b_lo + 1)
            if raw > 5 * SCAN_CANDIDATE_CAP:
                raise EnumerationCapExceeded(
                    "grid ranges for the region grew past the raw candidate budget"
                )
            for b in range(b_lo, b_hi + 1):
                y = _grid_coord(b, level)
                ddy = y - cy
                if ddx * ddx + ddy * ddy >= r2:
                    continue
                key = (x, y)
                if key in seen:
                    continue
                seen.add(key)
                yield Point(x, y)


def dense_point(region: Region, n: int) -> Point:
    """The n-th point (1-based) of the region's dense enumeration."""
    if n < 1:
        raise ValueError("n must be >= 1")
    try:
        return next(islice(dense_points(region), n - 1, None))
    except StopIteration:
        raise RegionExhausted(f"region has fewer than {n} representable points") from None


def first_radius(region: Region, x1: Point) -> float:
    """Radius rule for the first disc: min{1/4, diam/8} capped so the disc
    stays inside the region with margin."""
    slack = dist_to_region_complement(region, x1)  # raises if x1 outside
    return min(0.25, region_diameter(region) / 8.0, 0.5 * slack)


def next_center_index(region: Region, current: PackingSystem) -> int:
    """Smallest dense index whose point avoids every packed closure.

    Pure: rescans the enumeration from index 1.  Raises RegionExhausted if
    the region holds no such representable point, EnumerationCapExceeded
    past the candidate cap.
    """
    if not current.discs:
        raise ValueError("packing must already hold at least one disc")
    discs = [(pd.disc.center.x, pd.disc.center.y, pd.disc.radius) for pd in current.discs]
    for n, p in enumerate(dense_points(region), start=1):
        if n > SCAN_CANDIDATE_CAP:
            raise EnumerationCapExceeded(f"no free dense point within {SCAN_CANDIDATE_CAP} candidates")
        px, py = p.x, p.y
        for qx, qy, qr in discs:
            dx = px - qx
            dy = py - qy
            if dx * dx + dy * dy <= qr * qr:
                break
        else:
            return n
    raise RegionExhausted("every representable point of the region is covered")


def next_radius(region: Region, current: PackingSystem, center: Point) -> float:
    """Radius rule for the (k+1)-th disc around an admissible center."""
    slack = dist_to_region_complement(region, center)  # raises if outside
    free = slack
    for pd in current.discs:
        gap = dist(center, pd.disc.center) - pd.disc.radius
        if gap <= 0.0:
            raise ValueError("center lies inside the closure of a packed disc")
        free = min(free, gap)
    k = len(current.discs)
    base = min(1.0, 0.5 * region_diameter(region))
    dyadic = math.ldexp(base, -2 * (k + 1))
    return min(dyadic, 0.5 * free)


def build_packing(region: Region, count: int) -> PackingSystem:
    """Pack up to `count` discs into the region, deterministically.

    Returns fewer than `count` discs (exhausted=True) when double precision
    runs out: the region holds no further representable free point, or the
    dyadic radius term underflows to zero.
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    stream = dense_points(region)
    cursor = 0
    placed: list[PackedDisc] = []
    xs: list[float] = []
    ys: list[float] = []
    rs: list[float] = []
    exhausted = False
    diam = region_diameter(region)
    base = min(1.0, 0.5 * diam)

    while len(placed) < count:
        # Scan for the next admissible center.
        candidate = None
        examined = 0
        for p in stream:
            cursor += 1
            examined += 1
            if examined > SCAN_CANDIDATE_CAP:
                raise EnumerationCapExceeded(
                    f"no free dense point within {SCAN_CANDIDATE_CAP} candidates"
                )
            px, py = p.x, p.y
            for qx, qy, qr in zip(xs, ys, rs):
                dx = px - qx
                dy = py - qy
                if dx * dx + dy * dy <= qr * qr:
                    break
            else:
                candidate = p
                break
        if candidate is None:
            exhausted = True
            break

        if not placed:
            raw = min(0.25, diam / 8.0, 0.5 * dist_to_region_complement(region, candidate))
        else:
            free = dist_to_region_complement(region, candidate)
            cxp, cyp = candidate.x, candidate.y
            for qx, qy, qr in zip(xs, ys, rs):
                free = min(free, math.hypot(cxp - qx, cyp - qy) - qr)
            dyadic = math.ldexp(base, -2 * (len(placed) + 1))
            raw = min(dyadic, 0.5 * free)
        stored = raw * SAFETY_SHRINK
        if stored <= 0.0:
            exhausted = True
            break
        disc = Disc(candidate, stored)
        placed.append(PackedDisc(disc, cursor, len(placed) + 1))
        xs.append(candidate.x)
        ys.append(candidate.y)
        rs.append(stored)

    return PackingSystem(region, tuple(placed), cursor, exhausted)


def enlarge(ps: PackingSystem) -> EnlargedSystem:
    """Scale the i-th disc radius by 2^i (1-based); results are closed discs."""
    return EnlargedSystem(
        tuple(
            Disc(pd.disc.center, math.ldexp(pd.disc.radius, i))
            for i, pd in enumerate(ps.discs, start=1)
        )
    )


def area_sum(discs) -> float:
    """Total area of a collection of discs (exact for disjoint unions)."""
    return math.fsum(math.pi * d.radius * d.radius for d in discs)
