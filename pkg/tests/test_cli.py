import json
import math
import xml.etree.ElementTree as ET

import pytest

from discpack.cli import (
    EXIT_CHECK_FAILED,
    EXIT_MALFORMED,
    EXIT_OK,
    EXIT_RESOURCE_CAP,
    main,
)


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture()
def doc_path(tmp_path, capsys):
    path = tmp_path / "tree.json"
    assert main(["build", "--levels", "2", "--per-level", "5,3", "--out", str(path)]) == EXIT_OK
    capsys.readouterr()  # drain the build line so probes see clean output
    return str(path)


class TestBuild:
    def test_build_reports_counts(self, capsys, tmp_path):
        path = tmp_path / "t.json"
        code, out, _ = run(capsys, "build", "--levels", "1", "--per-level", "4", "--out", str(path))
        assert code == EXIT_OK
        payload = json.loads(out)
        assert payload["levels"] == [4]
        assert path.exists()

    def test_byte_identical_rebuild(self, capsys, tmp_path):
        p1, p2 = tmp_path / "a.json", tmp_path / "b.json"
        run(capsys, "build", "--per-level", "6,2", "--out", str(p1))
        run(capsys, "build", "--per-level", "6,2", "--out", str(p2))
        assert p1.read_bytes() == p2.read_bytes()

    def test_levels_mismatch_is_malformed(self, capsys, tmp_path):
        code, _, err = run(capsys, "build", "--levels", "3", "--per-level", "5,3", "--out", str(tmp_path / "x.json"))
        assert code == EXIT_MALFORMED
        assert "disagrees" in err

    def test_zero_count_is_malformed(self, capsys, tmp_path):
        code, _, _ = run(capsys, "build", "--per-level", "2,0", "--out", str(tmp_path / "x.json"))
        assert code == EXIT_MALFORMED

    def test_resource_cap_exit(self, capsys, tmp_path):
        code, _, err = run(capsys, "build", "--per-level", "1000,1000", "--out", str(tmp_path / "x.json"))
        assert code == EXIT_RESOURCE_CAP
        assert "cap" in err

    def test_disc_region_build(self, capsys, tmp_path):
        path = tmp_path / "d.json"
        code, out, _ = run(capsys, "build", "--per-level", "4", "--region", "disc:0,0,1", "--out", str(path))
        assert code == EXIT_OK
        assert json.loads(out)["levels"] == [4]

    def test_two_level_budget(self, capsys, tmp_path):
        path = tmp_path / "t.json"
        code, out, _ = run(capsys, "build", "--levels", "2", "--per-level", "50,10", "--out", str(path))
        assert code == EXIT_OK
        doc = json.loads(path.read_text())
        assert len(doc["levels"][0]) == 50
        assert len(doc["levels"][1]) <= 500

    def test_single_disc_document(self, capsys, tmp_path):
        path = tmp_path / "one.json"
        code, _, _ = run(capsys, "build", "--levels", "1", "--per-level", "1", "--out", str(path))
        assert code == EXIT_OK
        doc = json.loads(path.read_text())
        rec = doc["levels"][0][0]
        assert (rec["cx"], rec["cy"]) == (-1.0, -1.0)
        assert rec["r"] == 0.25 * (1.0 - 2.0 ** -20)
        assert rec["parent_index"] is None
        assert rec["seq_index"] == 1


class TestVerify:
    def test_fresh_build_passes(self, capsys, doc_path, tmp_path):
        report_path = tmp_path / "report.json"
        code, out, _ = run(capsys, "verify", doc_path, "--samples", "50", "--report", str(report_path))
        assert code == EXIT_OK
        payload = json.loads(out)
        assert payload["overall_pass"] is True
        assert json.loads(report_path.read_text()) == payload

    def test_samples_zero_skips_sampling(self, capsys, doc_path):
        code, out, _ = run(capsys, "verify", doc_path, "--samples", "0")
        assert code == EXIT_OK
        payload = json.loads(out)
        skipped = [c for c in payload["checks"] if c["status"] == "skip"]
        assert len(skipped) == 5

    def test_tampered_document_fails(self, capsys, doc_path, tmp_path):
        doc = json.loads(open(doc_path).read())
        doc["levels"][1][0]["r"] *= 2.0
        bad = tmp_path / "bad.json"
        bad.write_text(json.dumps(doc), encoding="ascii")
        code, out, _ = run(capsys, "verify", str(bad), "--samples", "0")
        assert code == EXIT_CHECK_FAILED
        assert json.loads(out)["overall_pass"] is False

    def test_malformed_document_exit(self, capsys, tmp_path):
        bad = tmp_path / "garbage.json"
        bad.write_text("{oops", encoding="ascii")
        code, _, err = run(capsys, "verify", str(bad))
        assert code == EXIT_MALFORMED
        assert "malformed" in err

    def test_future_version_rejected(self, capsys, doc_path, tmp_path):
        doc = json.loads(open(doc_path).read())
        doc["format_version"] = 99
        bad = tmp_path / "future.json"
        bad.write_text(json.dumps(doc), encoding="ascii")
        code, _, _ = run(capsys, "verify", str(bad))
        assert code == EXIT_MALFORMED

    def test_far_disc_region_verifies(self, capsys, tmp_path):
        # sampled checks follow the geometry, so a tree built far from the
        # origin still verifies meaningfully
        path = tmp_path / "far.json"
        run(capsys, "build", "--per-level", "8,3", "--region", "disc:100,-50,2", "--out", str(path))
        code, out, _ = run(capsys, "verify", str(path), "--samples", "100")
        assert code == EXIT_OK
        payload = json.loads(out)
        assert payload["overall_pass"] is True
        parity = next(c for c in payload["checks"] if c["name"] == "parity_agreement")
        assert parity["status"] == "pass"


class TestProbe:
    def test_chi_far_point(self, capsys, doc_path):
        code, out, _ = run(capsys, "probe", doc_path, "chi", "--point", "50,50")
        assert code == EXIT_OK
        payload = json.loads(out)
        assert payload["value"] == 0
        assert payload["certainty"] == "exact"
        assert payload["depth"] == 0

    def test_chi_negative_point(self, capsys, doc_path):
        code, out, _ = run(capsys, "probe", doc_path, "chi", "--point", "-1,-1")
        assert code == EXIT_OK
        payload = json.loads(out)
        assert payload["value"] == payload["depth"] % 2

    def test_chi_bad_point_is_malformed(self, capsys, doc_path):
        code, _, _ = run(capsys, "probe", doc_path, "chi", "--point", "oops")
        assert code == EXIT_MALFORMED

    def test_quotient(self, capsys, doc_path):
        code, out, _ = run(
            capsys, "probe", doc_path, "quotient",
            "--point", "3,3", "--dir", "1,0", "--hmin", "0.01", "--hmax", "1", "--samples", "8",
        )
        assert code == EXIT_OK
        payload = json.loads(out)
        assert len(payload["samples"]) == 8
        assert payload["max_quotient"] == 0.0

    def test_quotient_default_sample_count_halves_steps(self, capsys, doc_path):
        code, out, _ = run(
            capsys, "probe", doc_path, "quotient",
            "--point", "3,3", "--dir", "0,1", "--hmin", "0.125", "--hmax", "1",
        )
        assert code == EXIT_OK
        hs = [h for h, _ in json.loads(out)["samples"]]
        assert len(hs) == 4
        for got, want in zip(hs, [0.125, 0.25, 0.5, 1.0]):
            assert math.isclose(got, want, rel_tol=1e-12)

    def test_witness(self, capsys, doc_path):
        code, out, _ = run(capsys, "probe", doc_path, "witness", "--point", "0,0", "--eps", "2")
        assert code == EXIT_OK
        payload = json.loads(out)
        assert payload["status"] == "found"
        assert payload["witness"]["quotient"] >= 0.5

    def test_witness_truncation_report(self, capsys, doc_path):
        code, out, _ = run(capsys, "probe", doc_path, "witness", "--point", "50,50", "--eps", "1e-9")
        assert code == EXIT_OK
        payload = json.loads(out)
        assert payload["status"] == "no_opposite_disc"

    def test_blocked(self, capsys, doc_path):
        code, out, _ = run(capsys, "probe", doc_path, "blocked", "--point", "40,40")
        assert code == EXIT_OK
        payload = json.loads(out)
        assert 0.0 < payload["total"] < 3.15

    def test_blocked_inside_closure_is_malformed(self, capsys, doc_path):
        doc = json.loads(open(doc_path).read())
        cx, cy = doc["levels"][0][0]["cx"], doc["levels"][0][0]["cy"]
        code, _, err = run(capsys, "probe", doc_path, "blocked", "--point", f"{cx},{cy}")
        assert code == EXIT_MALFORMED
        assert "closure" in err


class TestRender:
    def test_render_svg(self, capsys, doc_path, tmp_path):
        out_path = tmp_path / "fig.svg"
        code, _, _ = run(capsys, "render", doc_path, "--out", str(out_path))
        assert code == EXIT_OK
        root = ET.parse(str(out_path)).getroot()
        count = sum(1 for e in root.iter() if e.tag.endswith("circle"))
        records = sum(len(level) for level in json.loads(open(doc_path).read())["levels"])
        assert count == records

    def test_render_with_enlarged(self, capsys, doc_path, tmp_path):
        out_path = tmp_path / "fig2.svg"
        code, _, _ = run(capsys, "render", doc_path, "--out", str(out_path), "--show-enlarged")
        assert code == EXIT_OK
        root = ET.parse(str(out_path)).getroot()
        dashed = [e for e in root.iter() if e.tag.endswith("circle") and e.get("stroke-dasharray")]
        assert dashed
