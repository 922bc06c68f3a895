"""Verification suite over a built or loaded disc tree.

Structural checks re-derive every construction inequality from the stored
geometry alone: pairwise gaps, containment margins, the radius decay rules,
the power-of-two enlargement bound, area budgets, nesting and per-level area
decay.  Sampled checks exercise the randomized bounds (subtended angles,
unit-vector differences, angular blockage, displaced-ball inequalities) and
cross-check the tree-descent parity oracle against an independent linear
scan over all discs.  All sampling is seeded; a report is reproducible given
(document, samples, seed).
"""

from __future__ import annotations

import math
import random
import time
from dataclasses import dataclass, field
from typing import Any

from .analysis import DisplacedBall, angular_blockage, displaced_ball_check
from .geometry import Disc, Point, UnitDirection, subtended_angle, unit_diff
from .hierarchy import DiscTree, indicator
from .packing import DiscRegion, area_sum, enlarge, region_diameter

GAP_SLACK = 1.0 - 1e-9


@dataclass
class CheckResult:
    name: str
    status: str  # "pass" | "fail" | "skip"
    measured: float | None = None
    bound: float | None = None
    margin: float | None = None
    detail: str = ""

    def to_json(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "status": self.status,
            "measured": self.measured,
            "bound": self.bound,
            "margin": self.margin,
            "detail": self.detail,
        }


@dataclass
class VerifyReport:
    samples: int
    seed: int
    checks: list[CheckResult] = field(default_factory=list)
    runtime_seconds: float = 0.0

    @property
    def overall_pass(self) -> bool:
        return all(c.status != "fail" for c in self.checks)

    def totals(self) -> dict[str, int]:
        out = {"pass": 0, "fail": 0, "skip": 0}
        for c in self.checks:
            out[c.status] += 1
        return out

    def to_json(self) -> dict[str, Any]:
        return {
            "format": "discpack-verify-report/1",
            "overall_pass": self.overall_pass,
            "samples": self.samples,
            "seed": self.seed,
            "runtime_seconds": self.runtime_seconds,
            "totals": self.totals(),
            "checks": [c.to_json() for c in self.checks],
        }


def _packings(tree: DiscTree):
    """Root packing plus the children packing of every internal node."""
    yield tree.root_packing()
    for k in range(tree.depth - 1):
        for node in tree.levels[k]:
            yield tree.children_packing(node)


def _check_pairwise_gap(tree: DiscTree) -> CheckResult:
    worst = None
    for ps in _packings(tree):
        ds = [pd.disc for pd in ps.discs]
        for k in range(1, len(ds)):
            ck, rk = ds[k].center, ds[k].radius
            for i in range(k):
                gap = math.hypot(ck.x - ds[i].center.x, ck.y - ds[i].center.y) - rk - ds[i].radius
                ratio = gap / rk
                if worst is None or ratio < worst:
                    worst = ratio
    if worst is None:
        return CheckResult("pairwise_gap", "pass", detail="no disc pairs")
    ok = worst >= GAP_SLACK and worst > 0.0
    return CheckResult(
        "pairwise_gap",
        "pass" if ok else "fail",
        measured=worst,
        bound=GAP_SLACK,
        margin=worst - GAP_SLACK,
        detail="min gap over later-disc radius, all sibling pairs",
    )


def _check_containment(tree: DiscTree) -> CheckResult:
    worst = None
    for ps in _packings(tree):
        if isinstance(ps.region, DiscRegion):
            rc = ps.region.disc.center
            rr = ps.region.disc.radius
            for pd in ps.discs:
                slack = rr - math.hypot(pd.disc.center.x - rc.x, pd.disc.center.y - rc.y)
                ratio = slack / (2.0 * pd.disc.radius)
                if worst is None or ratio < worst:
                    worst = ratio
    if worst is None:
        return CheckResult("containment_margin", "pass", detail="no disc-region packings")
    ok = worst >= GAP_SLACK
    return CheckResult(
        "containment_margin",
        "pass" if ok else "fail",
        measured=worst,
        bound=GAP_SLACK,
        margin=worst - GAP_SLACK,
        detail="min complement distance over twice the radius",
    )


def _check_radius_rule(tree: DiscTree) -> CheckResult:
    worst = 0.0
    for ps in _packings(tree):
        diam = region_diameter(ps.region)
        first_bound = min(0.25, diam / 8.0)
        base = min(1.0, 0.5 * diam)
        for pd in ps.discs:
            k = pd.level_index
            bound = first_bound if k == 1 else math.ldexp(base, -2 * k)
            ratio = pd.disc.radius / bound
            if ratio > worst:
                worst = ratio
    ok = worst <= 1.0
    return CheckResult(
        "radius_rule",
        "pass" if ok else "fail",
        measured=worst,
        bound=1.0,
        margin=1.0 - worst,
        detail="max radius over its decay bound (first disc: min{1/4, diam/8})",
    )


def _check_enlarged_radius(tree: DiscTree) -> CheckResult:
    worst = 0.0
    for ps in _packings(tree):
        for i, pd in enumerate(ps.discs, start=1):
            ratio = math.ldexp(pd.disc.radius, i) / math.ldexp(1.0, -i)
            if ratio > worst:
                worst = ratio
    ok = worst <= 1.0
    return CheckResult(
        "enlarged_radius",
        "pass" if ok else "fail",
        measured=worst,
        bound=1.0,
        margin=1.0 - worst,
        detail="max 2^i r_i over 2^-i",
    )


def _check_area_budget(tree: DiscTree) -> CheckResult:
    tol = 1e-9
    worst_excess = None
    for ps in _packings(tree):
        plain = area_sum(pd.disc for pd in ps.discs)
        if isinstance(ps.region, DiscRegion):
            bound = math.pi * ps.region.disc.radius ** 2 / 15.0
            excess = plain - bound
        else:
            enlarged = area_sum(enlarge(ps).discs)
            excess = max(plain - enlarged, enlarged - math.pi / 3.0)
        if worst_excess is None or excess > worst_excess:
            worst_excess = excess
    if worst_excess is None:
        return CheckResult("area_budget", "pass", detail="no packings")
    ok = worst_excess <= tol
    return CheckResult(
        "area_budget",
        "pass" if ok else "fail",
        measured=worst_excess,
        bound=tol,
        margin=tol - worst_excess,
        detail="max area excess over pi/3 (plane, enlarged) or pi R^2/15 (disc regions)",
    )


def _check_nesting(tree: DiscTree) -> CheckResult:
    worst = None
    for k in range(1, tree.depth):
        for node in tree.levels[k]:
            parent = tree.levels[k - 1][node.parent]
            slack = parent.disc.radius - (
                math.hypot(
                    node.disc.center.x - parent.disc.center.x,
                    node.disc.center.y - parent.disc.center.y,
                )
                + node.disc.radius
            )
            ratio = slack / node.disc.radius
            if worst is None or ratio < worst:
                worst = ratio
    if worst is None:
        return CheckResult("nesting", "pass", detail="single-level tree")
    ok = worst > 0.0
    return CheckResult(
        "nesting",
        "pass" if ok else "fail",
        measured=worst,
        bound=0.0,
        margin=worst,
        detail="min (parent radius - center distance - child radius) / child radius",
    )


def _check_level_area_decay(tree: DiscTree) -> CheckResult:
    from .hierarchy import level_union_area

    worst = 0.0
    for k in range(1, tree.depth):
        upper = level_union_area(tree, k) / 15.0
        ratio = level_union_area(tree, k + 1) / upper if upper > 0.0 else math.inf
        if ratio > worst:
            worst = ratio
    if tree.depth == 1:
        return CheckResult("level_area_decay", "pass", detail="single-level tree")
    ok = worst <= 1.0
    return CheckResult(
        "level_area_decay",
        "pass" if ok else "fail",
        measured=worst,
        bound=1.0,
        margin=1.0 - worst,
        detail="max level area over one fifteenth of the previous level",
    )


def _check_subtended(rng: random.Random, n: int) -> CheckResult:
    worst = 0.0
    for _ in range(n):
        r = 10.0 ** rng.uniform(-6.0, 1.0)
        cx = rng.uniform(-5.0, 5.0)
        cy = rng.uniform(-5.0, 5.0)
        d = r * (1.0 + 10.0 ** rng.uniform(-9.0, 3.0))
        ang = rng.uniform(0.0, 2.0 * math.pi)
        p = Point(cx + d * math.cos(ang), cy + d * math.sin(ang))
        disc = Disc(Point(cx, cy), r)
        dd = math.hypot(p.x - cx, p.y - cy)
        if dd <= r:
            continue
        ratio = subtended_angle(disc, p) * dd / (math.pi * r)
        if ratio > worst:
            worst = ratio
    ok = worst < 1.0
    return CheckResult(
        "subtended_angle_bound",
        "pass" if ok else "fail",
        measured=worst,
        bound=1.0,
        margin=1.0 - worst,
        detail=f"max theta*dist/(pi*r) over {n} random exterior viewpoints",
    )


def _check_unit_diff(rng: random.Random, n: int) -> CheckResult:
    tol = 1e-12
    worst = -math.inf
    for _ in range(n):
        ux, uy = rng.uniform(-10, 10), rng.uniform(-10, 10)
        vx, vy = rng.uniform(-10, 10), rng.uniform(-10, 10)
        if (ux == 0.0 and uy == 0.0) or (vx == 0.0 and vy == 0.0):
            continue
        lhs = unit_diff((ux, uy), (vx, vy))
        rhs = 2.0 * (math.hypot(ux - vx, uy - vy) / math.hypot(vx, vy))
        worst = max(worst, lhs - rhs)
    ok = worst <= tol
    return CheckResult(
        "unit_difference_bound",
        "pass" if ok else "fail",
        measured=worst,
        bound=tol,
        margin=tol - worst,
        detail=f"max lhs-rhs over {n} random vector pairs",
    )


def _sampling_box(tree: DiscTree) -> tuple[float, float, float, float]:
    """Bounding box of the materialized discs, inflated for exterior space."""
    xs: list[float] = []
    ys: list[float] = []
    for node in tree.levels[0]:
        d = node.disc
        xs.extend((d.center.x - d.radius, d.center.x + d.radius))
        ys.extend((d.center.y - d.radius, d.center.y + d.radius))
    x0, x1 = min(xs), max(xs)
    y0, y1 = min(ys), max(ys)
    pad = 0.25 * max(x1 - x0, y1 - y0, 1.0)
    return x0 - pad, x1 + pad, y0 - pad, y1 + pad


def _check_blockage(tree: DiscTree, rng: random.Random, n: int) -> CheckResult:
    ps = tree.root_packing()
    es = enlarge(ps)
    discs = [(pd.disc.center.x, pd.disc.center.y, pd.disc.radius) for pd in ps.discs]
    x0, x1, y0, y1 = _sampling_box(tree)
    worst = 0.0
    produced = 0
    attempts = 0
    while produced < n and attempts < 100 * n:
        attempts += 1
        y = Point(rng.uniform(x0, x1), rng.uniform(y0, y1))
        if any(
            (y.x - cx) ** 2 + (y.y - cy) ** 2 <= r * r for cx, cy, r in discs
        ):
            continue
        produced += 1
        report = angular_blockage(ps, es, y)  # raises if any per-index bound breaks
        if report.total > worst:
            worst = report.total
    ok = worst < math.pi and produced == n
    return CheckResult(
        "angular_blockage",
        "pass" if ok else "fail",
        measured=worst,
        bound=math.pi,
        margin=math.pi - worst,
        detail=f"max blocked-angle total over {produced} exterior viewpoints",
    )


def scan_depth(level_discs: list[list[tuple[float, float, float]]], x: float, y: float) -> int:
    """Deepest level whose discs contain (x, y), by exhaustive linear scan.

    Independent oracle for the tree-descent parity: no parent/child structure
    is used, every disc of every level is tested.
    """
    depth = 0
    for k, discs in enumerate(level_discs, start=1):
        for cx, cy, r in discs:
            dx = x - cx
            dy = y - cy
            if dx * dx + dy * dy < r * r:
                depth = k
                break
    return depth


def _check_parity(tree: DiscTree, rng: random.Random, n: int) -> CheckResult:
    level_discs = [
        [(node.disc.center.x, node.disc.center.y, node.disc.radius) for node in level]
        for level in tree.levels
    ]
    x0, x1, y0, y1 = _sampling_box(tree)
    agree = 0
    for _ in range(n):
        x = rng.uniform(x0, x1)
        y = rng.uniform(y0, y1)
        brute = scan_depth(level_discs, x, y) & 1
        if indicator(tree, Point(x, y)).value == brute:
            agree += 1
    ok = agree == n
    return CheckResult(
        "parity_agreement",
        "pass" if ok else "fail",
        measured=float(agree),
        bound=float(n),
        margin=float(agree - n),
        detail=f"tree descent vs exhaustive scan on {n} points of the disc bounding box",
    )


def _check_displaced_ball(rng: random.Random, instances: int, z_per_instance: int = 10) -> CheckResult:
    worst = 0.0
    for _ in range(instances):
        x = Point(rng.uniform(-5, 5), rng.uniform(-5, 5))
        r = 10.0 ** rng.uniform(-3.0, 0.5)
        ang = rng.uniform(0.0, 2.0 * math.pi)
        yp = Point(x.x + r * math.cos(ang), x.y + r * math.sin(ang))
        m = rng.randint(1, 10)
        v = UnitDirection.from_angle(rng.uniform(0.0, 2.0 * math.pi))
        ball = DisplacedBall(x, yp, m, v)
        c = ball.center
        for _ in range(z_per_instance):
            rho = ball.radius * math.sqrt(rng.random())
            za = rng.uniform(0.0, 2.0 * math.pi)
            z = Point(c.x + rho * math.cos(za), c.y + rho * math.sin(za))
            rep = displaced_ball_check(ball, z)
            if not rep.passed:
                return CheckResult(
                    "displaced_ball",
                    "fail",
                    measured=max(rep.unit_diff_x, rep.unit_diff_y) * m,
                    bound=1.0,
                    detail=f"violation at m={m}",
                )
            worst = max(worst, rep.unit_diff_x * m, rep.unit_diff_y * m)
    return CheckResult(
        "displaced_ball",
        "pass",
        measured=worst,
        bound=1.0,
        margin=1.0 - worst,
        detail=f"max m*unit_diff over {instances} instances x {z_per_instance} interior points",
    )


def run_verification(tree: DiscTree, samples: int = 1000, seed: int = 0) -> VerifyReport:
    """Run every check; sampled checks are scaled by `samples` and skipped
    entirely when samples == 0."""
    t0 = time.perf_counter()
    report = VerifyReport(samples=samples, seed=seed)
    report.checks.append(_check_pairwise_gap(tree))
    report.checks.append(_check_containment(tree))
    report.checks.append(_check_radius_rule(tree))
    report.checks.append(_check_enlarged_radius(tree))
    report.checks.append(_check_area_budget(tree))
    report.checks.append(_check_nesting(tree))
    report.checks.append(_check_level_area_decay(tree))

    if samples <= 0:
        for name in (
            "subtended_angle_bound",
            "unit_difference_bound",
            "angular_blockage",
            "parity_agreement",
            "displaced_ball",
        ):
            report.checks.append(CheckResult(name, "skip", detail="samples=0"))
    else:
        rng = random.Random(seed)
        report.checks.append(_check_subtended(rng, 10 * samples))
        report.checks.append(_check_unit_diff(rng, 100 * samples))
        report.checks.append(_check_blockage(tree, rng, max(1, samples // 10)))
        report.checks.append(_check_parity(tree, rng, samples))
        report.checks.append(_check_displaced_ball(rng, samples))
    report.runtime_seconds = time.perf_counter() - t0
    return report
