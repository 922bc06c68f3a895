"""Canonical on-disk form of a disc tree.

The JSON layout is flat: one array of records per level, each record carrying
center, radius, the parent's index in the previous level (null at level 1)
and the dense-sequence index.  Serialization is canonical -- sorted keys,
compact separators, shortest round-tripping decimal floats -- so identical
trees produce byte-identical files and load(save(tree)) reproduces the tree
bit-exactly.
"""

from __future__ import annotations

import json
import math
from typing import Any

from .geometry import Disc, Point
from .hierarchy import DiscNode, DiscTree
from .packing import PLANE, SAFETY_SHRINK, DiscRegion, Region

FORMAT_VERSION = 1


class DocumentError(Exception):
    """The document is malformed or has an unsupported format version."""


def _region_descriptor(region: Region) -> dict[str, Any]:
    if isinstance(region, DiscRegion):
        d = region.disc
        return {"kind": "disc", "cx": d.center.x, "cy": d.center.y, "r": d.radius}
    return {"kind": "plane"}


def _region_from_descriptor(desc: Any) -> Region:
    if not isinstance(desc, dict) or "kind" not in desc:
        raise DocumentError("region descriptor missing or malformed")
    if desc["kind"] == "plane":
        return PLANE
    if desc["kind"] == "disc":
        try:
            return DiscRegion(Disc(Point(float(desc["cx"]), float(desc["cy"])), float(desc["r"])))
        except (KeyError, TypeError, ValueError) as exc:
            raise DocumentError(f"bad disc region: {exc}") from exc
    raise DocumentError(f"unknown region kind {desc['kind']!r}")


def tree_to_document(tree: DiscTree) -> dict[str, Any]:
    return {
        "format_version": FORMAT_VERSION,
        "region": _region_descriptor(tree.root_region),
        "build": {
            "per_level": list(tree.counts),
            "safety_shrink": SAFETY_SHRINK,
        },
        "levels": [
            [
                {
                    "cx": n.disc.center.x,
                    "cy": n.disc.center.y,
                    "r": n.disc.radius,
                    "parent_index": n.parent,
                    "seq_index": n.seq_index,
                }
                for n in level
            ]
            for level in tree.levels
        ],
    }


def _require(cond: bool, message: str) -> None:
    if not cond:
        raise DocumentError(message)


def document_to_tree(doc: Any) -> DiscTree:
    _require(isinstance(doc, dict), "document root must be an object")
    version = doc.get("format_version")
    _require(
        isinstance(version, int) and version == FORMAT_VERSION,
        f"unsupported format_version {version!r} (expected {FORMAT_VERSION})",
    )
    region = _region_from_descriptor(doc.get("region"))
    build = doc.get("build")
    _require(isinstance(build, dict), "build parameters missing")
    per_level = build.get("per_level")
    _require(
        isinstance(per_level, list) and per_level and all(isinstance(c, int) and c >= 1 for c in per_level),
        "build.per_level must be a nonempty list of positive integers",
    )
    raw_levels = doc.get("levels")
    _require(isinstance(raw_levels, list) and raw_levels, "levels must be a nonempty list")
    _require(len(raw_levels) <= len(per_level), "more levels than per_level entries")

    levels: list[tuple[DiscNode, ...]] = []
    for level_no, raw in enumerate(raw_levels, start=1):
        _require(isinstance(raw, list) and raw, f"level {level_no} must be a nonempty list")
        nodes: list[DiscNode] = []
        for i, rec in enumerate(raw):
            _require(isinstance(rec, dict), f"level {level_no} record {i} must be an object")
            try:
                cx = float(rec["cx"])
                cy = float(rec["cy"])
                r = float(rec["r"])
                parent = rec["parent_index"]
                seq = rec["seq_index"]
            except (KeyError, TypeError, ValueError) as exc:
                raise DocumentError(f"level {level_no} record {i}: {exc}") from exc
            _require(
                math.isfinite(cx) and math.isfinite(cy) and math.isfinite(r) and r > 0.0,
                f"level {level_no} record {i}: non-finite or non-positive geometry",
            )
            _require(isinstance(seq, int) and seq >= 1, f"level {level_no} record {i}: bad seq_index")
            if level_no == 1:
                _require(parent is None, "level 1 records must have null parent_index")
            else:
                _require(
                    isinstance(parent, int) and 0 <= parent < len(levels[-1]),
                    f"level {level_no} record {i}: parent_index out of range",
                )
            nodes.append(DiscNode(Disc(Point(cx, cy), r), seq, level_no, i, parent, ()))
        levels.append(tuple(nodes))

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
    return DiscTree(region, tuple(per_level), tuple(wired))


def dumps_canonical(doc: dict[str, Any]) -> str:
    return json.dumps(doc, sort_keys=True, separators=(",", ":"), allow_nan=False) + "\n"


def save_tree(tree: DiscTree, path: str) -> None:
    with open(path, "w", encoding="ascii") as fh:
        fh.write(dumps_canonical(tree_to_document(tree)))


def load_tree(path: str) -> DiscTree:
    try:
        with open(path, "r", encoding="ascii") as fh:
            doc = json.load(fh)
    except (OSError, ValueError) as exc:
        raise DocumentError(f"cannot read document: {exc}") from exc
    return document_to_tree(doc)
