"""Numerical probes over packings and trees.

Every probe here estimates a limiting quantity (a limsup over step sizes or
over approach sequences) from finitely many deterministic samples, so results
are estimates tied to the sampled grid, never certificates of the limit.
Randomness only enters through explicit seeds.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Callable

from .geometry import Point, Sector, UnitDirection, dist, sector_contains, subtended_angle, unit_diff
from .hierarchy import DiscTree, avoids_enlarged_tail, indicator, interior_samples
from .packing import EnlargedSystem, PackingSystem

Oracle = Callable[[Point], float]


@dataclass(frozen=True)
class QuotientSample:
    """One directional difference quotient |f(x+hu) - f(x)| / h."""

    h: float
    quotient: float


@dataclass(frozen=True)
class BlockageEntry:
    index: int
    theta: float
    bound: float


@dataclass(frozen=True)
class BlockageReport:
    """Sum of angles subtended by the discs whose enlargement excludes the
    viewpoint, with the exempt indices (enlargements containing it) listed."""

    total: float
    entries: tuple[BlockageEntry, ...]
    exempt: tuple[int, ...]


def angular_blockage(ps: PackingSystem, es: EnlargedSystem, y: Point) -> BlockageReport:
    """Angles subtended at y by the packed discs, skipping enlarged hits.

    Requires y outside the closure of every packed disc.  For each index i
    with y outside the i-th closed enlarged disc, the subtended angle is
    strictly below pi * 2^-i because the enlarged radius is 2^i times the
    packed one; indices whose enlargement contains y are reported exempt.
    """
    if len(es.discs) != len(ps.discs):
        raise ValueError("enlarged system does not match the packing")
    for pd in ps.discs:
        if dist(y, pd.disc.center) <= pd.disc.radius:
            raise ValueError("viewpoint lies in the closure of a packed disc")
    entries: list[BlockageEntry] = []
    exempt: list[int] = []
    for i, (pd, ed) in enumerate(zip(ps.discs, es.discs), start=1):
        dx = y.x - ed.center.x
        dy = y.y - ed.center.y
        if dx * dx + dy * dy <= ed.radius * ed.radius:
            exempt.append(i)
            continue
        theta = subtended_angle(pd.disc, y)
        bound = math.pi * math.ldexp(1.0, -i)
        if not theta < bound:
            raise ArithmeticError(
                f"subtended angle {theta} at index {i} reached its bound {bound}"
            )
        entries.append(BlockageEntry(i, theta, bound))
    total = math.fsum(e.theta for e in entries)
    return BlockageReport(total, tuple(entries), tuple(exempt))


def directional_quotients(
    oracle: Oracle,
    x: Point,
    u: UnitDirection,
    h_min: float,
    h_max: float,
    samples: int,
) -> list[QuotientSample]:
    """Difference quotients along a ray at geometrically spaced step sizes.

    Steps run from h_min up to h_max inclusive; callers inspect the sup or
    the trend of the returned samples.
    """
    if not (0.0 < h_min < h_max):
        raise ValueError("need 0 < h_min < h_max")
    if samples < 2:
        raise ValueError("need at least two samples")
    f0 = oracle(x)
    ratio = h_max / h_min
    out: list[QuotientSample] = []
    for j in range(samples):
        if j == 0:
            h = h_min
        elif j == samples - 1:
            h = h_max
        else:
            h = h_min * ratio ** (j / (samples - 1))
        q = abs(oracle(Point(x.x + h * u.ux, x.y + h * u.uy)) - f0) / h
        out.append(QuotientSample(h, q))
    return out


@dataclass(frozen=True)
class FlipWitness:
    """A nearby point where the tree indicator takes the opposite value."""

    point: Point
    distance: float
    quotient: float
    level: int
    index: int


@dataclass(frozen=True)
class WitnessSearch:
    status: str  # "found" | "no_opposite_disc" | "no_regular_sample"
    witness: FlipWitness | None
    base_value: int
    candidates: int
    message: str


def find_flip_witness(
    tree: DiscTree,
    x: Point,
    eps: float,
    cutoff: int,
    samples_per_disc: int = 96,
) -> WitnessSearch:
    """Search the materialized tree for a regular point y within eps of x
    where the indicator value flips.

    Scans discs of parity opposite to the value at x, lowest level first,
    keeping only discs contained in B(x, eps); inside each it takes the first
    interior sample that passes the enlarged-tail filter.  The quotient of a
    found witness is 1/||y-x|| > 1/eps.  Failure means the truncated tree
    holds no qualifying disc (or no representable regular point inside any),
    which is a truncation artifact, not a statement about the full
    construction.
    """
    if eps <= 0.0:
        raise ValueError("eps must be positive")
    base = indicator(tree, x).value
    want = 1 - base
    candidates = 0
    sampled_any = False
    for level_no in range(1, tree.depth + 1):
        if level_no & 1 != want:
            continue
        for node in tree.levels[level_no - 1]:
            if dist(node.disc.center, x) + node.disc.radius > eps:
                continue
            candidates += 1
            for y in interior_samples(tree, node, samples_per_disc):
                if not avoids_enlarged_tail(tree, y, cutoff):
                    continue
                sampled_any = True
                d = dist(y, x)
                if d == 0.0:
                    continue
                w = FlipWitness(y, d, 1.0 / d, node.level, node.index)
                return WitnessSearch("found", w, base, candidates, "witness found")
    if candidates == 0:
        return WitnessSearch(
            "no_opposite_disc",
            None,
            base,
            0,
            f"truncated tree holds no opposite-parity disc inside B(x, {eps})",
        )
    return WitnessSearch(
        "no_regular_sample",
        None,
        base,
        candidates,
        f"{candidates} candidate disc(s) held no regular sample point",
    )


@dataclass(frozen=True)
class DisplacedBall:
    """The ball of radius ||y - x|| centered at x - 6*m*||y-x||*v."""

    x: Point
    y: Point
    m: int
    v: UnitDirection

    def __post_init__(self) -> None:
        if self.m < 1:
            raise ValueError("m must be >= 1")
        if self.separation == 0.0:
            raise ValueError("x and y must differ")

    @property
    def separation(self) -> float:
        return dist(self.x, self.y)

    @property
    def center(self) -> Point:
        off = 6.0 * self.m * self.separation
        return Point(self.x.x - off * self.v.ux, self.x.y - off * self.v.uy)

    @property
    def radius(self) -> float:
        return self.separation


@dataclass(frozen=True)
class DisplacedBallReport:
    """Distance-shell and direction-cone facts for a point of the ball.

    For z in the open ball, ||x-z|| must land in [6mr - r, 6mr + r] and
    ||y-z|| in [6mr - 2r, 6mr + 2r], while the unit directions of x-z and
    y-z must both sit within 1/m of v.
    """

    dist_x: float
    dist_y: float
    x_shell_ok: bool
    y_shell_ok: bool
    unit_diff_x: float
    unit_diff_y: float
    x_cone_ok: bool
    y_cone_ok: bool

    @property
    def passed(self) -> bool:
        return self.x_shell_ok and self.y_shell_ok and self.x_cone_ok and self.y_cone_ok


def displaced_ball_check(ball: DisplacedBall, z: Point) -> DisplacedBallReport:
    """Verify the shell and cone inequalities at a point of the open ball."""
    c = ball.center
    r = ball.radius
    if dist(z, c) >= r:
        raise ValueError("z must lie strictly inside the displaced ball")
    six_mr = 6.0 * ball.m * r
    dx = dist(ball.x, z)
    dy = dist(ball.y, z)
    ud_x = unit_diff((ball.x.x - z.x, ball.x.y - z.y), (ball.v.ux, ball.v.uy))
    ud_y = unit_diff((ball.y.x - z.x, ball.y.y - z.y), (ball.v.ux, ball.v.uy))
    inv_m = 1.0 / ball.m
    return DisplacedBallReport(
        dist_x=dx,
        dist_y=dy,
        x_shell_ok=six_mr - r <= dx <= six_mr + r,
        y_shell_ok=six_mr - 2.0 * r <= dy <= six_mr + 2.0 * r,
        unit_diff_x=ud_x,
        unit_diff_y=ud_y,
        x_cone_ok=ud_x < inv_m,
        y_cone_ok=ud_y < inv_m,
    )


@dataclass(frozen=True)
class SectorProbeResult:
    max_quotient: float
    argmax: Point | None
    evaluated: int


def sector_quotient_probe(
    oracle: Oracle,
    x: Point,
    s: Sector,
    sample_count: int,
    rng_seed: int,
) -> SectorProbeResult:
    """Estimate the sup of |f(y)-f(x)|/||y-x|| over seeded points of a sector
    with vertex x."""
    if s.vertex != x:
        raise ValueError("sector vertex must equal the probe point")
    if sample_count < 1:
        raise ValueError("sample_count must be >= 1")
    rng = random.Random(rng_seed)
    axis_angle = math.atan2(s.axis.uy, s.axis.ux)
    half_angle = 2.0 * math.asin(min(s.opening, 2.0) / 2.0)
    f0 = oracle(x)
    best = 0.0
    argmax: Point | None = None
    evaluated = 0
    for _ in range(sample_count):
        ang = axis_angle + rng.uniform(-half_angle, half_angle)
        rho = s.radius * math.sqrt(rng.random())
        y = Point(x.x + rho * math.cos(ang), x.y + rho * math.sin(ang))
        if not sector_contains(s, y):
            continue
        evaluated += 1
        q = abs(oracle(y) - f0) / dist(y, x)
        if argmax is None or q > best:
            best = q
            argmax = y
    return SectorProbeResult(best, argmax, evaluated)
