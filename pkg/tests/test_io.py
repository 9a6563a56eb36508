import io
import json

import pytest

from phasebal.balancing import balance
from phasebal.fuzzy import default_controller, infer_change
from phasebal.io import (
    ControllerFormatError,
    FeederFormatError,
    load_reference_feeder,
    parse_controller,
    parse_feeder_csv,
    reference_controller_text,
    reference_feeder_text,
    write_controller,
    write_feeder_csv,
    write_moves_csv,
    write_report,
)
from phasebal.model import FeederSnapshot, phase_totals


class TestParseFeederCsv:
    def test_happy_path(self):
        snap = parse_feeder_csv("phase1,phase2,phase3\n5,4,1\n3,2,\n")
        assert snap.phases == ((5.0, 3.0), (4.0, 2.0), (1.0,))

    def test_blank_cells_mean_no_point(self):
        snap = parse_feeder_csv("phase1,phase2,phase3\n5,,\n,,2\n")
        assert snap.phases == ((5.0,), (), (2.0,))

    def test_fractional_values(self):
        snap = parse_feeder_csv("phase1,phase2,phase3\n1.5,2.25,0.75\n")
        assert snap.phases == ((1.5,), (2.25,), (0.75,))

    def test_bad_header(self):
        with pytest.raises(FeederFormatError, match="line 1"):
            parse_feeder_csv("a,b,c\n1,2,3\n")

    def test_wrong_column_count(self):
        with pytest.raises(FeederFormatError, match="line 3"):
            parse_feeder_csv("phase1,phase2,phase3\n1,2,3\n1,2\n")

    def test_non_numeric_value(self):
        with pytest.raises(FeederFormatError, match="phase2"):
            parse_feeder_csv("phase1,phase2,phase3\n1,x,3\n")

    def test_negative_value(self):
        with pytest.raises(FeederFormatError, match="negative"):
            parse_feeder_csv("phase1,phase2,phase3\n1,-2,3\n")

    def test_non_finite_value(self):
        with pytest.raises(FeederFormatError, match="finite"):
            parse_feeder_csv("phase1,phase2,phase3\n1,inf,3\n")

    def test_header_only(self):
        with pytest.raises(FeederFormatError, match="no load points"):
            parse_feeder_csv("phase1,phase2,phase3\n")

    def test_empty_text(self):
        with pytest.raises(FeederFormatError, match="empty"):
            parse_feeder_csv("")

    def test_all_blank_rows(self):
        with pytest.raises(FeederFormatError, match="no load points"):
            parse_feeder_csv("phase1,phase2,phase3\n,,\n")


class TestFeederRoundTrip:
    def test_reference_file_round_trips(self):
        text = reference_feeder_text()
        snap = parse_feeder_csv(text)
        out = io.StringIO()
        write_feeder_csv(snap, out)
        assert parse_feeder_csv(out.getvalue()) == snap
        assert out.getvalue() == text

    def test_ragged_phases_pad_with_blanks(self):
        snap = FeederSnapshot.from_lists([[1, 2, 3], [4], []])
        out = io.StringIO()
        write_feeder_csv(snap, out)
        lines = out.getvalue().splitlines()
        assert lines[1] == "1,4,"
        assert lines[2] == "2,,"
        assert parse_feeder_csv(out.getvalue()) == snap

    def test_reference_totals(self):
        assert phase_totals(load_reference_feeder()) == (245.0, 120.0, 82.0)


class TestControllerFormat:
    def test_packaged_controller_matches_builtin(self):
        assert parse_controller(reference_controller_text()) == default_controller()

    def test_round_trip(self):
        out = io.StringIO()
        write_controller(default_controller(), out)
        assert parse_controller(out.getvalue()) == default_controller()

    def test_comments_and_blank_lines_ignored(self):
        text = (
            "# a controller\n\n"
            "input load 0 10\n"
            "term low 0 0 10   # left shoulder\n"
            "term high 0 10 10\n"
            "output change -5 5\n"
            "term down -5 -5 5\n"
            "term up -5 5 5\n"
            "rule low -> up\n"
            "rule high -> down\n"
        )
        ctrl = parse_controller(text)
        assert len(ctrl.rules) == 2
        assert ctrl.input.universe == (0.0, 10.0)

    def test_resolution_directive(self):
        text = (
            "input load 0 10\nterm low 0 0 10\nterm high 0 10 10\n"
            "output change -5 5\nterm down -5 -5 5\nterm up -5 5 5\n"
            "rule low -> up\nresolution 2001\n"
        )
        assert parse_controller(text).integration_resolution == 2001

    def test_unknown_statement(self):
        with pytest.raises(ControllerFormatError, match="line 1"):
            parse_controller("frobnicate 1 2 3\n")

    def test_rule_syntax_error(self):
        text = "input load 0 10\nterm low 0 0 10\nterm high 0 10 10\noutput change -5 5\nterm d -5 -5 5\nterm u -5 5 5\nrule low up\n"
        with pytest.raises(ControllerFormatError, match="line 7"):
            parse_controller(text)

    def test_term_before_variable(self):
        with pytest.raises(ControllerFormatError, match="before any"):
            parse_controller("term low 0 0 10\n")

    def test_missing_output(self):
        with pytest.raises(ControllerFormatError, match="output"):
            parse_controller("input load 0 10\nterm low 0 0 10\nrule low -> low\n")

    def test_unknown_rule_term_wrapped(self):
        text = (
            "input load 0 10\nterm low 0 0 10\nterm high 0 10 10\n"
            "output change -5 5\nterm d -5 -5 5\nterm u -5 5 5\n"
            "rule nothing -> u\n"
        )
        with pytest.raises(ControllerFormatError):
            parse_controller(text)

    def test_custom_controller_drives_inference(self):
        text = (
            "input load 0 10\nterm low 0 0 10\nterm high 0 10 10\n"
            "output change -5 5\nterm down -5 -5 5\nterm up -5 5 5\n"
            "rule low -> up\nrule high -> down\n"
        )
        ctrl = parse_controller(text)
        assert infer_change(ctrl, 5.0) == pytest.approx(0.0, abs=1e-6)


class TestReport:
    def test_key_order_and_values(self, reference_feeder):
        report = balance(reference_feeder)
        doc = json.loads(write_report(report))
        assert list(doc) == [
            "status",
            "initial_totals",
            "initial_unbalance",
            "iterations",
            "final_totals",
            "final_unbalance",
        ]
        assert doc["status"] == "balanced"
        assert doc["initial_totals"] == [245, 120, 82]
        assert doc["initial_unbalance"] == 108.67
        assert doc["final_totals"] == [146, 150, 151]
        assert doc["final_unbalance"] == 3.33
        it = doc["iterations"][0]
        assert list(it) == [
            "totals_before",
            "fuzzy_raw",
            "avg_error",
            "error_vector",
            "fuzzy_corrected",
            "moves",
            "totals_after",
            "unbalance_after",
        ]
        assert it["fuzzy_raw"] == [-104, 25, 65]
        assert it["fuzzy_corrected"] == [-99, 30, 69]

    def test_moves_use_one_based_positions(self, reference_feeder):
        report = balance(reference_feeder)
        doc = json.loads(write_report(report))
        moves = doc["iterations"][0]["moves"]
        assert len(moves) == 20
        assert all(mv["from"] == 1 for mv in moves)
        assert all(mv["to"] in (2, 3) for mv in moves)
        assert all(mv["index"] >= 1 for mv in moves)
        received = {2: 0, 3: 0}
        for mv in moves:
            received[mv["to"]] += mv["kw"]
        assert received == {2: 30, 3: 69}

    def test_infeasible_report_carries_reason(self):
        feeder = FeederSnapshot.from_lists(
            [[50, 50, 50, 50, 45], [60, 60], [42, 40]]
        )
        report = balance(feeder)
        doc = json.loads(write_report(report))
        assert doc["status"] == "infeasible"
        assert "phase 2" in doc["reason"]
        assert "infeasibility" in doc["iterations"][0]

    def test_replaying_moves_reproduces_final_totals(self, reference_feeder):
        report = balance(reference_feeder)
        doc = json.loads(write_report(report))
        phases = [list(p) for p in reference_feeder.phases]
        for it in doc["iterations"]:
            removals = []
            for mv in it["moves"]:
                src, idx, dst = mv["from"] - 1, mv["index"] - 1, mv["to"] - 1
                assert phases[src][idx] == mv["kw"]
                phases[dst].append(mv["kw"])
                removals.append((src, idx))
            for src, idx in sorted(removals, reverse=True):
                del phases[src][idx]
        totals = [sum(p) for p in phases]
        assert totals == doc["final_totals"]


class TestMovesCsv:
    def test_flat_move_listing(self, reference_feeder):
        report = balance(reference_feeder)
        out = io.StringIO()
        write_moves_csv(report, out)
        lines = out.getvalue().splitlines()
        assert lines[0] == "iteration,from,index,to,kw"
        assert len(lines) == 21
        first = lines[1].split(",")
        assert first[0] == "1" and first[1] == "1"
