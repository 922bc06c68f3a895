"""Nested generations of packings and the membership parity oracle.

Level 1 packs the root region (normally the plane); every deeper level packs
each disc of the previous level.  A point's depth is the number of levels of
discs it sits inside; the parity of that depth is the value of the indicator
of the alternating union (odd depths in, even depths out).  A finite build
can only certify the value up to its deepest materialized level, so readings
carry a certainty flag: ``exact`` when the deepest disc reached has its
children materialized and the point avoids them all, ``frontier`` when the
point sits in a deepest-level disc and a deeper build could still flip it.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Iterator

from .geometry import Disc, Point, dist_sq
from .packing import (
    PLANE,
    DiscRegion,
    PackedDisc,
    PackingSystem,
    Region,
    build_packing,
)

# Relative squared-distance tolerance for "on a boundary circle" tests.
BOUNDARY_REL_TOL = 1e-12

DEFAULT_DISC_CAP = 1_000_000


class ResourceCapExceeded(Exception):
    """The requested hierarchy would exceed the configured disc budget."""


@dataclass(frozen=True)
class LevelSpec:
    """Per-level packing budgets: counts[0] discs at level 1, and counts[k]
    discs into each parent disc at level k+1."""

    counts: tuple[int, ...]
    cap: int = DEFAULT_DISC_CAP

    def __post_init__(self) -> None:
        if len(self.counts) < 1:
            raise ValueError("at least one level is required")
        if any(c < 1 for c in self.counts):
            raise ValueError(f"per-level counts must be >= 1, got {self.counts}")

    @property
    def depth(self) -> int:
        return len(self.counts)

    def worst_case_total(self) -> int:
        total = 0
        layer = 1
        for c in self.counts:
            layer *= c
            total += layer
        return total


@dataclass(frozen=True)
class DiscNode:
    """A materialized disc: geometry plus its place in the tree."""

    disc: Disc
    seq_index: int
    level: int
    index: int
    parent: int | None
    children: tuple[int, ...]


@dataclass(frozen=True)
class LocationPath:
    """Result of point location: the chain of nested discs holding the point."""

    chain: tuple[DiscNode, ...]
    boundary: bool

    @property
    def depth(self) -> int:
        return len(self.chain)

    @property
    def frontier(self) -> bool:
        return bool(self.chain) and not self.chain[-1].children


@dataclass(frozen=True)
class IndicatorReading:
    """Parity value at a point with its truncation certainty."""

    value: int
    certainty: str  # "exact" | "frontier"
    depth: int
    boundary: bool


class DiscTree:
    """Immutable hierarchy of packings; safe for concurrent readers."""

    def __init__(
        self,
        root_region: Region,
        counts: tuple[int, ...],
        levels: tuple[tuple[DiscNode, ...], ...],
    ) -> None:
        self.root_region = root_region
        self.counts = counts
        self.levels = levels
        self._flat: list[tuple[float, float, float]] | None = None

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DiscTree):
            return NotImplemented
        return (
            self.root_region == other.root_region
            and self.counts == other.counts
            and self.levels == other.levels
        )

    @property
    def depth(self) -> int:
        return len(self.levels)

    def total_discs(self) -> int:
        return sum(len(level) for level in self.levels)

    def node(self, level: int, index: int) -> DiscNode:
        return self.levels[level - 1][index]

    def root_packing(self) -> PackingSystem:
        discs = tuple(
            PackedDisc(n.disc, n.seq_index, i + 1) for i, n in enumerate(self.levels[0])
        )
        cursor = discs[-1].seq_index if discs else 0
        return PackingSystem(self.root_region, discs, cursor)

    def children_packing(self, node: DiscNode) -> PackingSystem:
        kids = [self.levels[node.level][j] for j in node.children]
        discs = tuple(PackedDisc(k.disc, k.seq_index, i + 1) for i, k in enumerate(kids))
        cursor = discs[-1].seq_index if discs else 0
        return PackingSystem(DiscRegion(node.disc), discs, cursor)

    def flat_discs(self) -> list[tuple[float, float, float]]:
        """All disc records as (cx, cy, r), cached."""
        if self._flat is None:
            self._flat = [
                (n.disc.center.x, n.disc.center.y, n.disc.radius)
                for level in self.levels
                for n in level
            ]
        return self._flat


def build_hierarchy(spec: LevelSpec, root_region: Region = PLANE) -> DiscTree:
    """Materialize the nested packings level by level, deterministically.

    Packings that exhaust double precision simply hold fewer discs than the
    per-level budget asks for.  Raises ResourceCapExceeded if the worst-case
    disc total would exceed the spec cap.
    """
    if spec.worst_case_total() > spec.cap:
        raise ResourceCapExceeded(
            f"worst-case total {spec.worst_case_total()} exceeds cap {spec.cap}"
        )

    levels: list[tuple[DiscNode, ...]] = []
    for level_no, count in enumerate(spec.counts, start=1):
        records: list[tuple[Disc, int, int | None]] = []
        if level_no == 1:
            for pd in build_packing(root_region, count).discs:
                records.append((pd.disc, pd.seq_index, None))
        else:
            for parent_idx, parent in enumerate(levels[-1]):
                for pd in build_packing(DiscRegion(parent.disc), count).discs:
                    records.append((pd.disc, pd.seq_index, parent_idx))
        levels.append(
            tuple(
                DiscNode(disc, seq, level_no, i, parent, ())
                for i, (disc, seq, parent) in enumerate(records)
            )
        )

    # Wire children indices now that every level exists.
    wired: list[tuple[DiscNode, ...]] = []
    for k, level in enumerate(levels):
        if k + 1 < len(levels):
            kids: list[list[int]] = [[] for _ in level]
            for j, child in enumerate(levels[k + 1]):
                kids[child.parent].append(j)
            wired.append(
                tuple(
                    DiscNode(n.disc, n.seq_index, n.level, n.index, n.parent, tuple(kids[i]))
                    for i, n in enumerate(level)
                )
            )
        else:
            wired.append(level)
    return DiscTree(root_region, spec.counts, tuple(wired))


def locate(tree: DiscTree, p: Point) -> LocationPath:
    """Greedy descent through the open discs containing the point.

    At each level at most one sibling can contain the point (closures are
    pairwise disjoint).  A point exactly on a boundary circle, by squared
    distance, stops the descent with the boundary flag set.
    """
    chain: list[DiscNode] = []
    boundary = False
    candidates: tuple[DiscNode, ...] = tree.levels[0] if tree.levels else ()
    while True:
        hit = None
        for n in candidates:
            d2 = dist_sq(p, n.disc.center)
            r2 = n.disc.radius * n.disc.radius
            if d2 < r2:
                hit = n
                break
            if d2 == r2:
                boundary = True
        if hit is None:
            break
        chain.append(hit)
        if not hit.children:
            break
        candidates = tuple(tree.levels[hit.level][j] for j in hit.children)
    return LocationPath(tuple(chain), boundary)


def indicator(tree: DiscTree, p: Point) -> IndicatorReading:
    """Parity of the nesting depth at p: 1 inside an odd number of levels."""
    path = locate(tree, p)
    certainty = "frontier" if path.frontier else "exact"
    return IndicatorReading(path.depth & 1, certainty, path.depth, path.boundary)


def level_union_area(tree: DiscTree, k: int) -> float:
    """Total area of the level-k discs (their union: siblings are disjoint)."""
    if not 1 <= k <= tree.depth:
        raise ValueError(f"level {k} out of range 1..{tree.depth}")
    return math.fsum(
        math.pi * n.disc.radius * n.disc.radius for n in tree.levels[k - 1]
    )


def on_any_boundary(tree: DiscTree, p: Point) -> bool:
    """Whether p lies on some materialized boundary circle, within a relative
    squared-distance tolerance of BOUNDARY_REL_TOL."""
    px, py = p.x, p.y
    for cx, cy, r in tree.flat_discs():
        dx = px - cx
        dy = py - cy
        d2 = dx * dx + dy * dy
        r2 = r * r
        if abs(d2 - r2) <= BOUNDARY_REL_TOL * r2:
            return True
    return False


def avoids_enlarged_tail(tree: DiscTree, p: Point, cutoff: int) -> bool:
    """Finite-build stand-in for the point being direction-regular.

    True iff p sits on no materialized boundary circle and, within the
    packing that holds p at its deepest level (the root packing for depth 0),
    p avoids every enlarged disc of index beyond the cutoff.  Enlarged discs
    are closed; the low indices up to the cutoff are the tolerated finite
    exception set.
    """
    if cutoff < 1:
        raise ValueError("cutoff must be >= 1")
    if on_any_boundary(tree, p):
        return False
    path = locate(tree, p)
    if path.chain:
        deepest = path.chain[-1]
        packing = tree.children_packing(deepest)
    else:
        packing = tree.root_packing()
    px, py = p.x, p.y
    for i, pd in enumerate(packing.discs, start=1):
        if i <= cutoff:
            continue
        big = math.ldexp(pd.disc.radius, i)
        dx = px - pd.disc.center.x
        dy = py - pd.disc.center.y
        if dx * dx + dy * dy <= big * big:
            return False
    return True


def interior_samples(tree: DiscTree, node: DiscNode, limit: int = 96) -> Iterator[Point]:
    """Deterministic candidate points inside a node's disc but outside all of
    its children.

    The stream starts at the disc center, then probes rings just outside each
    child (where free space is guaranteed by the no-touching gaps), then fills
    with a seeded pseudo-random spread.  Consumers apply further filters.
    """
    disc = node.disc
    cx, cy, r = disc.center.x, disc.center.y, disc.radius
    kids = [tree.levels[node.level][j].disc for j in node.children]

    def admissible(x: float, y: float) -> Point | None:
        dx = x - cx
        dy = y - cy
        if dx * dx + dy * dy >= r * r:
            return None
        for kd in kids:
            kdx = x - kd.center.x
            kdy = y - kd.center.y
            if kdx * kdx + kdy * kdy < kd.radius * kd.radius:
                return None
        return Point(x, y)

    emitted = 0

    p = admissible(cx, cy)
    if p is not None:
        emitted += 1
        yield p
    if emitted >= limit:
        return

    for kd in kids:
        for factor in (1.25, 1.5, 2.0):
            rho = factor * kd.radius
            for j in range(8):
                ang = j * (math.pi / 4.0)
                p = admissible(
                    kd.center.x + rho * math.cos(ang),
                    kd.center.y + rho * math.sin(ang),
                )
                if p is not None:
                    emitted += 1
                    yield p
                    if emitted >= limit:
                        return

    rng = random.Random(node.level * 1_000_003 + node.index)
    attempts = 0
    while emitted < limit and attempts < 64 * limit:
        attempts += 1
        rho = r * math.sqrt(rng.random())
        ang = rng.random() * 2.0 * math.pi
        p = admissible(cx + rho * math.cos(ang), cy + rho * math.sin(ang))
        if p is not None:
            emitted += 1
            yield p


def first_regular_sample(
    tree: DiscTree, node: DiscNode, cutoff: int, limit: int = 96
) -> Point | None:
    """First interior sample of the node passing the enlarged-tail filter,
    or None when the disc has no representable free point (a truncation
    artifact of double precision)."""
    for p in interior_samples(tree, node, limit):
        if avoids_enlarged_tail(tree, p, cutoff):
            return p
    return None
