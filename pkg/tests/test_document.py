import json

import pytest

from discpack.document import (
    DocumentError,
    document_to_tree,
    dumps_canonical,
    load_tree,
    save_tree,
    tree_to_document,
)
from discpack.geometry import Disc, Point
from discpack.hierarchy import LevelSpec, build_hierarchy
from discpack.packing import DiscRegion
from discpack.verify import run_verification


class TestRoundTrip:
    def test_tree_survives_round_trip(self, tree_medium, tmp_path):
        path = tmp_path / "t.json"
        save_tree(tree_medium, str(path))
        loaded = load_tree(str(path))
        assert loaded == tree_medium

    def test_save_is_canonical_bytes(self, tree_small, tmp_path):
        p1, p2 = tmp_path / "a.json", tmp_path / "b.json"
        save_tree(tree_small, str(p1))
        save_tree(tree_small, str(p2))
        assert p1.read_bytes() == p2.read_bytes()

    def test_reserialization_is_identical(self, tree_medium, tmp_path):
        path = tmp_path / "t.json"
        save_tree(tree_medium, str(path))
        first = path.read_bytes()
        save_tree(load_tree(str(path)), str(path))
        assert path.read_bytes() == first

    def test_disc_region_root_round_trips(self, tmp_path):
        tree = build_hierarchy(LevelSpec((4, 2)), DiscRegion(Disc(Point(0.5, -0.5), 2.0)))
        path = tmp_path / "d.json"
        save_tree(tree, str(path))
        assert load_tree(str(path)) == tree

    def test_keys_sorted(self, tree_small):
        text = dumps_canonical(tree_to_document(tree_small))
        obj = json.loads(text)
        assert list(obj.keys()) == sorted(obj.keys())


class TestValidation:
    def make_doc(self, tree_small):
        return tree_to_document(tree_small)

    def test_rejects_future_version(self, tree_small):
        doc = self.make_doc(tree_small)
        doc["format_version"] = 2
        with pytest.raises(DocumentError):
            document_to_tree(doc)

    def test_rejects_missing_version(self, tree_small):
        doc = self.make_doc(tree_small)
        del doc["format_version"]
        with pytest.raises(DocumentError):
            document_to_tree(doc)

    def test_rejects_bad_radius(self, tree_small):
        doc = self.make_doc(tree_small)
        doc["levels"][0][0]["r"] = -1.0
        with pytest.raises(DocumentError):
            document_to_tree(doc)

    def test_rejects_bad_parent(self, tree_small):
        doc = self.make_doc(tree_small)
        doc["levels"][1][0]["parent_index"] = 99
        with pytest.raises(DocumentError):
            document_to_tree(doc)

    def test_rejects_garbage_file(self, tmp_path):
        path = tmp_path / "g.json"
        path.write_text("{not json", encoding="ascii")
        with pytest.raises(DocumentError):
            load_tree(str(path))

    def test_rejects_unknown_region(self, tree_small):
        doc = self.make_doc(tree_small)
        doc["region"] = {"kind": "torus"}
        with pytest.raises(DocumentError):
            document_to_tree(doc)


class TestTamperDetection:
    def test_doubled_radius_fails_verification(self, tree_medium):
        doc = tree_to_document(tree_medium)
        doc["levels"][1][0]["r"] *= 2.0
        tampered = document_to_tree(doc)
        report = run_verification(tampered, samples=0)
        assert not report.overall_pass
        failing = {c.name for c in report.checks if c.status == "fail"}
        assert failing & {"pairwise_gap", "containment_margin", "radius_rule", "nesting"}
