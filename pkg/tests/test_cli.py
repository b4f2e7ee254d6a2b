import csv
import io
import json

import pytest

from concord import cli
from concord.cli import main, parse_grid
from concord.objects import BlockValidation, SimEstimate

REFERENCE = ["--agents", "9,7,6,5,3", "--lambda", "15"]


def _rows(text: str) -> list[dict[str, str]]:
    return list(csv.DictReader(io.StringIO(text)))


class TestWardrop:
    def test_grand_coalition(self, capsys):
        assert main([*REFERENCE, "wardrop", "0,1,2,3,4"]) == 0
        (row,) = _rows(capsys.readouterr().out)
        assert row["servers"] == "30"
        assert float(row["rate"]) == pytest.approx(15.0)

    def test_singletons_share_blocking(self, capsys):
        assert main([*REFERENCE, "wardrop", "0|1|2|3|4"]) == 0
        rows = _rows(capsys.readouterr().out)
        assert len(rows) == 5
        assert sum(float(row["rate"]) for row in rows) == pytest.approx(15.0)
        assert len({row["blocking"] for row in rows}) == 1

    def test_input_labels_are_kept(self, capsys):
        assert main(["--agents", "3,9,7", "--lambda", "5", "wardrop", "0|1,2"]) == 0
        rows = _rows(capsys.readouterr().out)
        assert {row["block"]: row["servers"] for row in rows} == {"0": "3", "1 2": "16"}

    def test_overlap_is_invalid(self):
        assert main([*REFERENCE, "wardrop", "0,1|1,2,3,4"]) == 3

    def test_missing_agent_is_invalid(self):
        assert main([*REFERENCE, "wardrop", "0,1|2,3"]) == 3

    def test_garbage_does_not_parse(self):
        assert main([*REFERENCE, "wardrop", "0,,1|x"]) == 2


class TestStable:
    def test_every_partition_listed(self, capsys):
        assert main([*REFERENCE, "--rule", "rb-ia", "stable"]) == 0
        rows = _rows(capsys.readouterr().out)
        assert len(rows) == 52
        assert all(row["stable"] == "0" for row in rows if int(row["blocks"]) >= 3)
        assert any(row["stable"] == "1" for row in rows)

    def test_too_many_agents(self):
        assert main(["--agents", ",".join(["1"] * 11), "--lambda", "5", "stable"]) == 4

    def test_unknown_rule(self):
        assert main([*REFERENCE, "--rule", "nope", "stable"]) == 2


class TestSweeps:
    def test_kstar_sweep(self, capsys):
        argv = [*REFERENCE, "--grid", "0.3:300:3log", "kstar-sweep"]
        assert main(argv) == 0
        first = capsys.readouterr().out
        rows = _rows(first)
        assert [row["kstar"] for row in rows] == ["19", rows[1]["kstar"], "27"]

        assert main(argv) == 0
        assert capsys.readouterr().out == first

    def test_bad_grid(self):
        assert main([*REFERENCE, "--grid", "300:0.3:3log", "kstar-sweep"]) == 2
        assert main([*REFERENCE, "--grid", "1:2", "kstar-sweep"]) == 2

    def test_psi(self, capsys):
        assert main([*REFERENCE, "psi"]) == 0
        rows = _rows(capsys.readouterr().out)
        ks = [int(row["k"]) for row in rows]
        assert ks == sorted(ks)
        assert 15 in ks and 27 in ks

    def test_parse_grid(self):
        assert parse_grid("1:100:3log") == pytest.approx((1.0, 10.0, 100.0))
        assert parse_grid("1:3:3lin") == pytest.approx((1.0, 2.0, 3.0))


class TestDynamics:
    def test_summary_line(self, capsys, tmp_path):
        trace = tmp_path / "trace.csv"
        argv = [*REFERENCE, "--lambda", "0.3", "--seed", "4", "--out", str(trace), "dynamics"]
        assert main(argv) == 0
        summary = capsys.readouterr().out.strip()
        assert summary.startswith("terminal=stable steps=")
        assert trace.read_text().startswith("step,rgs,blocker,kind,phi_0")

    def test_general_rule_is_invalid(self):
        assert main([*REFERENCE, "--rule", "gb-pa", "dynamics"]) == 3


class TestValidate:
    @staticmethod
    def _fake(covered: bool):
        def validate_we(spec, partition, horizon, seed, **kwargs):
            target = 0.1
            fraction = target if covered else target + 0.5
            estimate = SimEstimate(blocked_fraction=fraction, half_width_95=0.01, arrivals_observed=horizon)
            return tuple(
                BlockValidation(block, block.servers(spec), 1.0, target, estimate) for block in partition
            )
        return validate_we

    def test_all_covered(self, monkeypatch, capsys):
        monkeypatch.setattr(cli, "validate_we", self._fake(True))
        assert main([*REFERENCE, "validate"]) == 0
        rows = _rows(capsys.readouterr().out)
        assert len(rows) == 1 + 5

    def test_miss_is_reported(self, monkeypatch, capsys):
        monkeypatch.setattr(cli, "validate_we", self._fake(False))
        assert main([*REFERENCE, "--initial", "0,1|2,3,4", "validate"]) == 5
        assert len(_rows(capsys.readouterr().out)) == 1 + 2


class TestConfiguration:
    def test_missing_system(self):
        assert main(["psi"]) == 2
        assert main(["--agents", "9,7", "psi"]) == 2

    def test_invalid_system(self):
        assert main(["--agents", "9,0", "--lambda", "1", "psi"]) == 3

    def test_unreadable_file(self, tmp_path):
        broken = tmp_path / "broken.json"
        broken.write_text("{")
        assert main(["--config", str(broken), "psi"]) == 2

    def test_emit_round_trip(self, tmp_path, capsys):
        path = tmp_path / "system.json"
        assert main([*REFERENCE, "--mu", "2", "--emit-config", str(path)]) == 0
        assert json.loads(path.read_text()) == {"agents": [9, 7, 6, 5, 3], "lambda": 15.0, "mu": 2.0}

        assert main(["--config", str(path), "psi"]) == 0
        from_file = capsys.readouterr().out
        assert main([*REFERENCE, "--mu", "2", "psi"]) == 0
        assert capsys.readouterr().out == from_file

    def test_no_command(self):
        assert main(REFERENCE) == 2
