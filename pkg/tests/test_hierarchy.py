import math
import random

import pytest

from discpack.geometry import Disc, Point
from discpack.hierarchy import (
    DiscTree,
    LevelSpec,
    ResourceCapExceeded,
    avoids_enlarged_tail,
    build_hierarchy,
    first_regular_sample,
    indicator,
    interior_samples,
    level_union_area,
    locate,
)
from discpack.packing import SAFETY_SHRINK


def brute_depth(tree: DiscTree, p: Point) -> int:
    """Independent oracle: deepest level containing p by scanning every disc."""
    depth = 0
    for k, level in enumerate(tree.levels, start=1):
        for node in level:
            if (p.x - node.disc.center.x) ** 2 + (p.y - node.disc.center.y) ** 2 < node.disc.radius ** 2:
                depth = k
                break
    return depth


class TestLevelSpec:
    def test_rejects_bad_counts(self):
        with pytest.raises(ValueError):
            LevelSpec((2, 0))
        with pytest.raises(ValueError):
            LevelSpec(())

    def test_worst_case_total(self):
        assert LevelSpec((2, 3, 4)).worst_case_total() == 2 + 6 + 24

    def test_resource_cap(self):
        with pytest.raises(ResourceCapExceeded):
            build_hierarchy(LevelSpec((1000, 1000)))
        # explicit small cap trips even a modest request
        with pytest.raises(ResourceCapExceeded):
            build_hierarchy(LevelSpec((10, 10), cap=50))


class TestBuildHierarchy:
    def test_single_disc_tree(self):
        tree = build_hierarchy(LevelSpec((1,)))
        assert tree.depth == 1
        node = tree.levels[0][0]
        assert node.disc == Disc(Point(-1.0, -1.0), 0.25 * SAFETY_SHRINK)
        assert node.children == ()

    def test_one_child_tree(self):
        tree = build_hierarchy(LevelSpec((1, 1)))
        s = SAFETY_SHRINK
        child = tree.levels[1][0]
        # hand-run of the rules: the child packing sees diameter 0.5*s, so its
        # first radius is min{1/4, diam/8, half the center slack} = 0.0625*s,
        # shrunk once more on storage.
        assert child.disc == Disc(Point(-1.0, -1.0), 0.0625 * s * s)
        assert child.parent == 0
        assert tree.levels[0][0].children == (0,)

    def test_levels_match_parent_runs(self, tree_medium):
        for k in range(1, tree_medium.depth):
            for node in tree_medium.levels[k]:
                assert node.parent is not None
                parent = tree_medium.levels[k - 1][node.parent]
                assert node.index in parent.children

    def test_determinism(self):
        a = build_hierarchy(LevelSpec((5, 3)))
        b = build_hierarchy(LevelSpec((5, 3)))
        assert a == b

    def test_nesting_strict(self, tree_medium):
        for k in range(1, tree_medium.depth):
            for node in tree_medium.levels[k]:
                parent = tree_medium.levels[k - 1][node.parent]
                d = math.hypot(
                    node.disc.center.x - parent.disc.center.x,
                    node.disc.center.y - parent.disc.center.y,
                )
                assert d + node.disc.radius < parent.disc.radius


class TestLocate:
    def test_outside_everything(self, tree_medium):
        path = locate(tree_medium, Point(50.0, 50.0))
        assert path.depth == 0 and not path.boundary and not path.frontier

    def test_depth_one_and_frontier(self, tree_small):
        # center of a level-1 disc whose child sits at the same center: the
        # descent lands in the deepest materialized level
        root = tree_small.levels[0][0]
        path = locate(tree_small, root.disc.center)
        assert path.depth == 2
        assert path.frontier

    def test_boundary_stops_descent(self, tree_small):
        d = tree_small.levels[0][0].disc
        p = Point(d.center.x + d.radius, d.center.y)
        path = locate(tree_small, p)
        assert path.boundary
        assert all(n.disc != d for n in path.chain)

    def test_matches_brute_force(self, tree_medium):
        rng = random.Random(31)
        for _ in range(2000):
            p = Point(rng.uniform(-2.5, 2.5), rng.uniform(-2.5, 2.5))
            assert locate(tree_medium, p).depth == brute_depth(tree_medium, p)


class TestIndicator:
    def test_outside_is_zero_exact(self, tree_medium):
        r = indicator(tree_medium, Point(50.0, 50.0))
        assert (r.value, r.certainty) == (0, "exact")

    def test_depth_one_exact_when_children_materialized(self, tree_medium):
        # a point inside a level-1 disc avoiding its children: value 1, exact
        node = tree_medium.levels[0][0]
        x = first_regular_sample(tree_medium, node, 3)
        r = indicator(tree_medium, x)
        assert (r.value, r.certainty, r.depth) == (1, "exact", 1)

    def test_frontier_at_deepest_level(self, tree_small):
        leaf = tree_small.levels[-1][0]
        r = indicator(tree_small, leaf.disc.center)
        assert r.depth == tree_small.depth
        assert r.certainty == "frontier"
        assert r.value == tree_small.depth & 1

    def test_parity_is_depth_mod_two(self, tree_medium):
        rng = random.Random(5)
        for _ in range(500):
            p = Point(rng.uniform(-2.5, 2.5), rng.uniform(-2.5, 2.5))
            r = indicator(tree_medium, p)
            assert r.value == r.depth % 2


class TestLevelUnionArea:
    def test_single_disc(self):
        tree = build_hierarchy(LevelSpec((1,)))
        r = 0.25 * SAFETY_SHRINK
        assert level_union_area(tree, 1) == math.pi * r * r

    def test_decay_within_one_fifteenth(self, tree_medium):
        for k in range(1, tree_medium.depth):
            assert level_union_area(tree_medium, k + 1) <= level_union_area(tree_medium, k) / 15.0

    def test_out_of_range(self, tree_small):
        with pytest.raises(ValueError):
            level_union_area(tree_small, 0)
        with pytest.raises(ValueError):
            level_union_area(tree_small, 3)


class TestEnlargedTailFilter:
    def test_far_point_passes(self, tree_medium):
        assert avoids_enlarged_tail(tree_medium, Point(50.0, 50.0), 3)

    def test_boundary_point_fails(self, tree_medium):
        d = tree_medium.levels[0][0].disc
        p = Point(d.center.x + d.radius, d.center.y)
        assert not avoids_enlarged_tail(tree_medium, p, 3)

    def test_point_in_tail_enlargement_fails(self, tree_medium):
        # find a depth-0 point sitting inside the enlargement of a disc with
        # index above the cutoff
        cutoff = 3
        ps = tree_medium.root_packing()
        target = ps.discs[cutoff]  # index cutoff+1, 1-based
        c, r = target.disc.center, target.disc.radius
        big = math.ldexp(r, cutoff + 1)
        hit = None
        for k in range(64):
            ang = k * 0.3
            rho = r + 0.45 * (big - r) * (1 + math.cos(ang))
            p = Point(c.x + rho * math.cos(ang), c.y + rho * math.sin(ang))
            if locate(tree_medium, p).depth == 0 and math.hypot(p.x - c.x, p.y - c.y) <= big:
                hit = p
                break
        assert hit is not None, "no exterior probe point found in the enlargement"
        assert not avoids_enlarged_tail(tree_medium, hit, cutoff)

    def test_head_enlargement_is_tolerated(self, tree_medium):
        # a depth-0 point inside only the first enlargement passes the filter
        ps = tree_medium.root_packing()
        first = ps.discs[0].disc
        p = Point(first.center.x + 1.5 * first.radius, first.center.y)
        assert locate(tree_medium, p).depth == 0
        assert avoids_enlarged_tail(tree_medium, p, 3)

    def test_cutoff_validation(self, tree_small):
        with pytest.raises(ValueError):
            avoids_enlarged_tail(tree_small, Point(0, 0), 0)


class TestInteriorSamples:
    def test_samples_avoid_children(self, tree_medium):
        node = tree_medium.levels[0][0]
        kids = [tree_medium.levels[1][j].disc for j in node.children]
        count = 0
        for p in interior_samples(tree_medium, node, 64):
            count += 1
            assert (p.x - node.disc.center.x) ** 2 + (p.y - node.disc.center.y) ** 2 < node.disc.radius ** 2
            for kd in kids:
                assert (p.x - kd.center.x) ** 2 + (p.y - kd.center.y) ** 2 >= kd.radius ** 2
        assert count > 0

    def test_first_regular_sample_depth(self, tree_medium):
        node = tree_medium.levels[0][2]
        x = first_regular_sample(tree_medium, node, 3)
        assert x is not None
        assert locate(tree_medium, x).depth == 1

    def test_degenerate_disc_has_no_sample(self, tree_spec):
        # deep micro discs hold a single representable point, covered by
        # their own child: no free sample exists
        node = tree_spec.levels[0][59]
        assert first_regular_sample(tree_spec, node, 3) is None
