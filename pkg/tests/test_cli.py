import csv
import io
import json
import subprocess
import sys

import pytest

from conftest import FIXTURES, SCENARIOS
from intertemporal import Hyperbolic
from intertemporal.cli import COMMANDS, execute, main
from intertemporal.scenario import ScenarioError, parse_scenario, scenario_from_dict, scenario_to_dict

INDEX = json.loads((SCENARIOS / "index.json").read_text())
INVALID = json.loads((FIXTURES / "invalid" / "cases.json").read_text())


def run_cli(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


class TestCanonicalScenarios:
    def test_index_covers_every_file_and_command(self):
        files = {p.name for p in SCENARIOS.glob("*.json")} - {"index.json"}
        assert {e["file"] for e in INDEX} == files
        assert {e["command"] for e in INDEX} == set(COMMANDS)

    @pytest.mark.parametrize("entry", INDEX, ids=lambda e: e["file"])
    @pytest.mark.parametrize("fmt", ["table", "csv", "json"])
    def test_runs_and_repeats_identically(self, capsys, entry, fmt):
        path = str(SCENARIOS / entry["file"])
        first = run_cli(capsys, entry["command"], path, "--format", fmt)
        second = run_cli(capsys, entry["command"], path, "--format", fmt)
        assert first[0] == 0 and first[2] == ""
        assert first == second

    @pytest.mark.parametrize("entry", INDEX, ids=lambda e: e["file"])
    def test_round_trip(self, entry):
        sc = parse_scenario((SCENARIOS / entry["file"]).read_text())
        again = scenario_from_dict(json.loads(json.dumps(scenario_to_dict(sc))))
        assert again == sc

    @pytest.mark.parametrize("entry", INDEX, ids=lambda e: e["file"])
    def test_json_embeds_resolved_scenario(self, entry):
        sc, text = execute(entry["command"], (SCENARIOS / entry["file"]).read_text(), "json")
        doc = json.loads(text)
        assert doc["command"] == entry["command"]
        assert scenario_from_dict(doc["scenario"]) == sc


class TestChooseReport:
    def test_weekday_values(self):
        _, text = execute("choose", (SCENARIOS / "weekday_choice.json").read_text(), "csv")
        rows = list(csv.DictReader(io.StringIO(text)))
        assert [r["selection"] for r in rows] == ["B", "A"]
        got = [(float(r["value_a"]), float(r["value_b"])) for r in rows]
        assert got == [pytest.approx((8, 10), abs=1e-12), pytest.approx((16, 15), abs=1e-12)]

    def test_json_result(self):
        _, text = execute("choose", (SCENARIOS / "weekday_choice.json").read_text(), "json")
        doc = json.loads(text)
        assert doc["scenario"]["discount"] == {"family": "hyperbolic"}


class TestRunReports:
    def test_naive_task_never_done(self):
        _, text = execute("run", (SCENARIOS / "task_procrastination.json").read_text(), "csv")
        rows = list(csv.DictReader(io.StringIO(text)))
        assert [r["action"] for r in rows] == ["wait", "wait", "wait"]

    def test_commitment_gets_task_done(self):
        _, text = execute("run", (SCENARIOS / "task_commitment.json").read_text(), "csv")
        rows = list(csv.DictReader(io.StringIO(text)))
        assert [r["action"] for r in rows] == ["wait", "wait", "do"]

    def test_compare_agents_columns(self):
        _, text = execute("compare-agents", (SCENARIOS / "consumption_compare.json").read_text(), "csv")
        rows = list(csv.DictReader(io.StringIO(text)))
        assert list(rows[0]) == ["period", "naive", "sophisticated", "committed", "self_modifying", "agree"]
        assert [r["naive"] for r in rows] == ["3", "2", "0"]
        assert [r["sophisticated"] for r in rows] == ["4", "1", "0"]

    def test_consistency_verdict(self):
        _, text = execute("check-consistency", (SCENARIOS / "consistency_exponential.json").read_text(), "json")
        assert json.loads(text)["result"]["consistent"] is True

    def test_hyperbolic_consistency_witness(self):
        text = json.dumps({"discount": {"family": "hyperbolic"}, "consistency": {"horizon": 5}})
        _, out = execute("check-consistency", text, "csv")
        row = next(csv.DictReader(io.StringIO(out)))
        assert (row["witness_a"], row["witness_b"]) == ("0", "1")

    def test_reversal_found(self):
        _, text = execute("find-reversal", (SCENARIOS / "reversal_hyperbolic.json").read_text(), "csv")
        row = next(csv.DictReader(io.StringIO(text)))
        assert row["found"] == "true"
        assert (row["small_amount"], row["small_at"], row["large_amount"], row["large_at"]) == ("2", "2", "3", "3")

    def test_dilate_total(self):
        _, text = execute("dilate", (SCENARIOS / "dilate.json").read_text(), "csv")
        rows = list(csv.DictReader(io.StringIO(text)))
        totals = {r["itinerary"]: float(r["proper_time"]) for r in rows if r["segment"] == "total"}
        assert totals["home"] == pytest.approx(10, abs=1e-12)
        # 6 at 0.8c gives 3.6, 4 at gravity ratio 0.75 gives 2
        assert totals["traveler"] == pytest.approx(5.6, abs=1e-12)

    def test_interest_rate_form(self):
        text = json.dumps({"discount": {"family": "exponential", "interest_rate": 1.0},
                           "consistency": {"horizon": 10}})
        sc, _ = execute("check-consistency", text, "json")
        assert sc.discount.delta == 0.5


class TestInvalid:
    @pytest.mark.parametrize("case", INVALID, ids=lambda c: c["file"])
    def test_fixture(self, capsys, case):
        code, out, err = run_cli(capsys, case["command"], str(FIXTURES / "invalid" / case["file"]))
        assert code == case["exit"]
        assert out == ""
        assert err.startswith(f"error[{case['code']}]")
        if "field" in case:
            assert f" at {case['field']}:" in err

    def test_missing_file(self, capsys, tmp_path):
        code, out, err = run_cli(capsys, "choose", str(tmp_path / "nope.json"))
        assert code == 2 and out == ""
        assert err.startswith("error[E_IO]")

    def test_scenario_error_fields(self):
        with pytest.raises(ScenarioError) as info:
            parse_scenario('{"discount": {"family": "exponential", "delta": 1.5}}')
        assert (info.value.code, info.value.field) == ("E_INVARIANT", "discount.delta")

    @pytest.mark.parametrize("value", ["true", "null", "[0.5]", '{"x": 1}'])
    def test_delta_types(self, value):
        with pytest.raises(ScenarioError) as info:
            parse_scenario('{"discount": {"family": "exponential", "delta": %s}}' % value)
        assert info.value.code == "E_TYPE"

    def test_both_delta_and_rate(self):
        with pytest.raises(ScenarioError):
            parse_scenario('{"discount": {"family": "exponential", "delta": 0.5, "interest_rate": 1}}')


class TestOutputs:
    def test_output_path(self, capsys, tmp_path):
        dest = tmp_path / "report.csv"
        code, out, _ = run_cli(capsys, "choose", str(SCENARIOS / "weekday_choice.json"),
                               "--format", "csv", "--output", str(dest))
        assert code == 0 and out == ""
        assert dest.read_text().splitlines()[0] == "vantage,value_a,value_b,selection"

    def test_stdin(self, monkeypatch, capsys):
        monkeypatch.setattr(sys, "stdin", io.StringIO((SCENARIOS / "weekday_choice.json").read_text()))
        code, out, _ = run_cli(capsys, "choose", "-", "--format", "csv")
        assert code == 0 and out.count("\n") == 3

    def test_console_script_module(self):
        r = subprocess.run(
            [sys.executable, "-m", "intertemporal", "choose", str(SCENARIOS / "weekday_choice.json"), "--format", "csv"],
            capture_output=True, text=True, check=False,
        )
        assert r.returncode == 0
        assert r.stdout.splitlines()[1].endswith(",B")

    def test_hyperbolic_default_discount_object(self):
        sc = parse_scenario((SCENARIOS / "weekday_choice.json").read_text())
        assert sc.discount == Hyperbolic()
