"""Scenario parsing, validation, runner behaviour, catalogue integrity."""

import shutil

import pytest

from stablepi1 import torus
from stablepi1.scenarios import (
    BiTriPayload,
    ParseError,
    Scenario,
    ValidationError,
    VanKampenPayload,
    bundled_catalogue_dir,
    load_catalogue,
    load_scenario,
    run_scenario,
    verify_catalogue,
)

EXPECTED_ORDERS = {
    "P1": 4,
    "P2": 1,
    "P3": 3,
    "X1.1": 1,
    "X1.2": 1,
    "X1.3": 3,
    "X1.4": 4,
    "X1.5": 5,
    "B1": 4,
    "B2": 3,
    "E1": 1,
    "E2": 2,
    "E3": 3,
    "E4": 4,
    "E5": 5,
    "E2red": 1,
    "E3red": 1,
    "E4red": 1,
    "E5red": 1,
    "dP": 1,
    "R3": 3,
    "R4": 4,
    "R5": 5,
}


class TestLoad:
    def test_bundled_p1(self):
        s = load_scenario(bundled_catalogue_dir() / "P1.scn")
        assert s.id == "P1"
        assert s.kind == "vankampen"
        assert isinstance(s.payload, VanKampenPayload)
        assert (s.expected_order, s.expected_cyclic) == (4, True)

    def test_bundled_e2(self):
        s = load_scenario(bundled_catalogue_dir() / "E2.scn")
        assert s.kind == "torus-lattice"
        assert isinstance(s.payload, BiTriPayload)
        assert (s.expected_order, s.expected_cyclic) == (2, True)

    def test_dangling_edge_rejected(self, tmp_path):
        bad = tmp_path / "bad.scn"
        bad.write_text(
            "meta\nid BAD\nkind vankampen\nexpected\norder 1\ncyclic yes\n"
            "complex dbar\nbasepoint P\nvertex P\nedge e P MISSING\n"
            "complex d\nbasepoint Q\nvertex Q\n"
            "map\nvertex P Q\nedge e -e\n"
        )
        with pytest.raises(ValidationError, match="dangling"):
            load_scenario(bad)

    def test_syntax_error_carries_line(self, tmp_path):
        bad = tmp_path / "bad.scn"
        bad.write_text("meta\nid BAD\nkind vankampen\nexpected\norder nope\n")
        with pytest.raises(ParseError, match="bad.scn:5"):
            load_scenario(bad)

    def test_unknown_kind(self, tmp_path):
        bad = tmp_path / "bad.scn"
        bad.write_text("meta\nid BAD\nkind telepathy\nexpected\norder 1\ncyclic yes\n")
        with pytest.raises(ValidationError, match="kind"):
            load_scenario(bad)

    def test_node_relation_enforced(self, tmp_path):
        text = (bundled_catalogue_dir() / "P1.scn").read_text()
        tampered = text.replace("nodes 4", "nodes 5")
        bad = tmp_path / "P1.scn"
        bad.write_text(tampered)
        with pytest.raises(ValidationError):
            load_scenario(bad)

    def test_twist_must_match_params(self, tmp_path):
        text = (bundled_catalogue_dir() / "E5.scn").read_text()
        bad = tmp_path / "E5.scn"
        bad.write_text(text.replace("twist 5", "twist 4"))
        with pytest.raises(ValidationError, match="twist"):
            load_scenario(bad)


class TestRun:
    def test_interleaved_lines_order_five(self):
        s = load_scenario(bundled_catalogue_dir() / "X1.5.scn")
        r = run_scenario(s)
        assert r.passed and r.order == 5 and r.cyclic

    def test_triple_diagonal_cover(self):
        s = load_scenario(bundled_catalogue_dir() / "B2.scn")
        r = run_scenario(s)
        assert r.passed and r.order == 3
        assert any("free action" in c for c in r.checks)
        assert any("3 points" in c for c in r.checks)

    def test_reducible_configuration_trivial(self):
        s = load_scenario(bundled_catalogue_dir() / "E5red.scn")
        r = run_scenario(s)
        assert r.passed and r.order == 1

    def test_failure_is_captured_not_raised(self):
        s = load_scenario(bundled_catalogue_dir() / "R4.scn")
        wrong = Scenario(
            id=s.id,
            kind=s.kind,
            payload=s.payload,
            expected_order=5,
            expected_cyclic=True,
            meta=s.meta,
        )
        r = run_scenario(wrong)
        assert not r.passed and r.order == 4 and r.error is None

    def test_report_dict_shape(self):
        s = load_scenario(bundled_catalogue_dir() / "P3.scn")
        d = run_scenario(s).to_dict()
        assert d["scenario"] == "P3"
        assert d["order"] == 3
        assert d["abelianization"] == {"free_rank": 0, "torsion": [3]}
        assert d["expected"] == {"order": 3, "cyclic": True}
        assert d["verdict"] == "pass"
        assert isinstance(d["elapsed_ms"], float)


class TestCatalogue:
    def test_all_pass_with_expected_orders(self):
        reports, summary = verify_catalogue()
        assert summary["total"] == len(EXPECTED_ORDERS) >= 18
        assert summary["all_pass"]
        for r in reports:
            assert r.passed, (r.scenario, r.error)
            assert r.order == EXPECTED_ORDERS[r.scenario]
            assert r.cyclic is True

    def test_ids_are_sorted_and_unique(self):
        reports, _ = verify_catalogue()
        ids = [r.scenario for r in reports]
        assert ids == sorted(ids)
        assert len(set(ids)) == len(ids)

    def test_empty_directory(self, tmp_path):
        reports, summary = verify_catalogue(tmp_path)
        assert reports == [] and summary == {"total": 0, "passed": 0, "all_pass": True}

    def test_corrupt_file_isolated(self, tmp_path):
        for name in ("P1.scn", "R3.scn"):
            shutil.copy(bundled_catalogue_dir() / name, tmp_path / name)
        (tmp_path / "broken.scn").write_text("meta\nid Z\n???\n")
        reports, summary = verify_catalogue(tmp_path)
        assert summary["total"] == 3 and summary["passed"] == 2
        broken = next(r for r in reports if r.scenario == "broken")
        assert not broken.passed and "ParseError" in broken.error

    def test_twisting_number_matches_id_numeral(self):
        for s in load_catalogue():
            if isinstance(s.payload, BiTriPayload):
                assert s.id == f"E{torus.twisting_number(s.payload.params)}"
            if "twist" in s.meta:
                digits = "".join(ch for ch in s.id if ch.isdigit())
                assert s.meta["twist"] == digits

    def test_metadata_strings_preserved(self):
        smoothable = {s.id: s.meta.get("smoothable") for s in load_catalogue()}
        assert smoothable["dP"] == "no"
        assert smoothable["E2"] == "unknown"
        assert smoothable["B1"] == "yes"
