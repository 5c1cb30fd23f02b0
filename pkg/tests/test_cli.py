"""CLI surface: JSON/CSV pipelines, exit codes, deterministic output."""

from __future__ import annotations

import json
import math

import pytest
from click.testing import CliRunner

from lks.cli import main

SAMPLE = ('{"chart":"elements","a":10,"e":0.5,"I":10,"omega_o":60,'
          '"Omega":10,"f":60}')


@pytest.fixture
def runner() -> CliRunner:
    return CliRunner()


class TestTransform:
    def test_elements_to_lks(self, runner):
        res = runner.invoke(main, ["transform", "--to", "lks", "--deg"],
                            input=SAMPLE)
        assert res.exit_code == 0
        body = json.loads(res.output)
        assert body["state"]["L"] == pytest.approx(2.0 * math.sqrt(10.0),
                                                   abs=1e-10)
        assert body["residuals"]["J"] == pytest.approx(0.0, abs=1e-12)

    def test_round_trip_through_files(self, runner, tmp_path):
        src = tmp_path / "orbit.json"
        src.write_text(SAMPLE)
        mid = tmp_path / "lks.json"
        res = runner.invoke(main, ["transform", "--to", "lks", "--deg",
                                   "--in", str(src), "--out", str(mid)])
        assert res.exit_code == 0
        state = json.loads(mid.read_text())["state"]
        state["chart"] = "lks"
        back = runner.invoke(main, ["transform", "--to", "cartesian"],
                             input=json.dumps(state))
        assert back.exit_code == 0
        x = json.loads(back.output)["state"]["x"]
        assert math.isfinite(x[0])

    def test_byte_identical_outputs(self, runner):
        r1 = runner.invoke(main, ["transform", "--to", "lks", "--deg"],
                           input=SAMPLE)
        r2 = runner.invoke(main, ["transform", "--to", "lks", "--deg"],
                           input=SAMPLE)
        assert r1.output == r2.output

    def test_degeneracy_exit_code_2(self, runner):
        circ_eq = ('{"chart":"elements","a":2,"e":0,"I":0,"omega_o":0,'
                   '"Omega":0,"f":0.3}')
        res = runner.invoke(main, ["transform", "--to", "lks"], input=circ_eq)
        assert res.exit_code == 2
        err = json.loads(res.output)["error"]
        assert err["type"] == "UndefinedAngles"
        assert err["undetermined"]

    def test_invalid_json_exit_code_3(self, runner):
        res = runner.invoke(main, ["transform", "--to", "lks"],
                            input="{not json")
        assert res.exit_code == 3

    def test_invalid_state_exit_code_3(self, runner):
        hyper = ('{"chart":"cartesian","x":[1,0,0],"X":[0,2,0],'
                 '"X_star":-0.5}')
        res = runner.invoke(main, ["transform", "--to", "ks"], input=hyper)
        assert res.exit_code == 3

    def test_error_leaves_no_partial_file(self, runner, tmp_path):
        out = tmp_path / "never.json"
        circ_eq = ('{"chart":"elements","a":2,"e":0,"I":0,"omega_o":0,'
                   '"Omega":0,"f":0.3}')
        res = runner.invoke(main, ["transform", "--to", "lks",
                                   "--out", str(out)], input=circ_eq)
        assert res.exit_code == 2
        assert not out.exists()


class TestClassify:
    def test_generic_circular(self, runner):
        state = json.dumps({"chart": "lks", "S": 1.0, "L": 1.0, "G": 0.6,
                            "Lambda": 0.0, "lambda": math.pi / 4.0})
        res = runner.invoke(main, ["classify"], input=state)
        assert res.exit_code == 0
        body = json.loads(res.output)
        assert body["class"] == "GenericCircular"
        assert body["undetermined"] == []

    def test_radial_polar(self, runner):
        state = json.dumps({"chart": "lks", "S": 1.0, "L": 1.0, "G": 0.0,
                            "Lambda": 1.0, "lambda": 0.9})
        res = runner.invoke(main, ["classify"], input=state)
        body = json.loads(res.output)
        assert body["class"] == "RadialPolar"
        assert body["undetermined"] == ["l", "g", "lambda"]

    def test_edge_sweep(self, runner):
        state = json.dumps({"chart": "lks", "S": 1.0, "L": 2.0, "G": 1.3,
                            "Lambda": 0.7, "lambda": 0.37, "l": 0.9,
                            "g": 0.7})
        res = runner.invoke(main, ["classify"], input=state)
        body = json.loads(res.output)
        assert body["edge"]["case"] == "a"
        assert body["edge"]["surviving_combination"] == "l03+g03"


class TestLK:
    def test_equilibria_criticality(self, runner):
        res = runner.invoke(main, ["lk", "equilibria", "--G", "0.75",
                                   "--L", "1"])
        assert res.exit_code == 0
        body = json.loads(res.output)
        assert body["critical_lambda_action"] == pytest.approx(0.115,
                                                               abs=1e-3)

    def test_portrait_csv(self, runner, tmp_path):
        out = tmp_path / "grid.csv"
        res = runner.invoke(main, ["lk", "portrait", "--G", "0.75",
                                   "--L", "1", "--grid", "13x7",
                                   "--out", str(out)])
        assert res.exit_code == 0
        lines = out.read_text().strip().split("\n")
        assert lines[0] == "lambda,Lambda,N"
        assert len(lines) == 1 + 13 * 7
        meta = json.loads(res.output)
        assert len(meta["separatrix_levels"]) == 1

    def test_portrait_deterministic(self, runner):
        args = ["lk", "portrait", "--G", "0.5", "--L", "1",
                "--grid", "11x5"]
        r1 = runner.invoke(main, args)
        r2 = runner.invoke(main, args)
        assert r1.output == r2.output

    def test_propagate(self, runner):
        res = runner.invoke(main, [
            "lk", "propagate", "--G", "0.75", "--L", "1",
            "--lambda0", "0.8", "--Lambda0", "0.05", "--tau-span", "1e6",
            "--samples", "32"])
        assert res.exit_code == 0
        lines = res.output.strip().split("\n")
        assert lines[0] == "tau,lambda,Lambda,N"
        assert len(lines) == 33

    def test_validate_no_oracle(self, runner):
        res = runner.invoke(main, ["lk", "validate", "--samples", "40",
                                   "--no-oracle"])
        assert res.exit_code == 0
        body = json.loads(res.output)
        assert body["passed"] is True

    def test_inadmissible_actions_exit_3(self, runner):
        res = runner.invoke(main, ["lk", "equilibria", "--G", "2.0",
                                   "--L", "1"])
        assert res.exit_code == 3


class TestFibre:
    def test_tracks_and_meta(self, runner, tmp_path):
        out = tmp_path / "tracks.csv"
        res = runner.invoke(main, ["fibre", "--deg", "--samples", "16",
                                   "--in", "-", "--out", str(out)],
                            input=SAMPLE)
        assert res.exit_code == 0
        lines = out.read_text().strip().split("\n")
        assert lines[0].startswith("phi,v0,v1,v2,v3,rot_v0")
        assert len(lines) == 17
        meta = json.loads(res.output)
        assert meta["plane03"]["G"] == pytest.approx(meta["plane12"]["G"],
                                                     abs=1e-12)

    def test_circular_equatorial_exit_2(self, runner):
        circ_eq = ('{"chart":"elements","a":2,"e":0,"I":0,"omega_o":0,'
                   '"Omega":0,"f":0.3}')
        res = runner.invoke(main, ["fibre"], input=circ_eq)
        assert res.exit_code == 2
