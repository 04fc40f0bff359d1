import csv
import json

import pytest

from cli import EXIT_FAILED, EXIT_OK, EXIT_USAGE, main
from construct import save_state
from tests.fixtures import a_mark, synthetic_state


def output_lines(capsys):
    return capsys.readouterr().out.splitlines()


class TestSequences:
    """Подкоманды itinerary и kneading"""

    def test_kneading_at_zero(self, capsys):
        assert main(["kneading", "--family", "cubic", "--gamma", "0", "--depth", "10"]) == EXIT_OK
        lines = output_lines(capsys)
        assert "sequence: 1^inf" in lines
        assert "prefix: 1111111111" in lines

    def test_itinerary_of_fixed_point(self, capsys):
        assert main(["itinerary", "--x", "0.5", "--depth", "6"]) == EXIT_OK
        lines = output_lines(capsys)
        assert "sequence: 2^inf" in lines
        assert "prefix: 222222" in lines

    @pytest.mark.parametrize("gamma", ["1/32", "-1", "one"])
    def test_bad_gamma(self, gamma):
        assert main(["kneading", "--gamma", gamma]) == EXIT_USAGE

    def test_negative_depth(self):
        assert main(["itinerary", "--x", "0", "--depth", "-1"]) == EXIT_USAGE


class TestUsage:
    """Разбор аргументов"""

    def test_no_command(self):
        assert main([]) == EXIT_USAGE

    def test_unknown_option(self):
        assert main(["kneading", "--colour"]) == EXIT_USAGE

    def test_help(self):
        assert main(["--help"]) == EXIT_OK


class TestRealize:
    """Реализация маршрутов и нидингов"""

    def test_realize_point(self, capsys):
        assert main(["realize-point", "--target", "12B"]) == EXIT_OK
        lines = output_lines(capsys)
        assert any(line.startswith("x: ") for line in lines)
        assert any(line.startswith("bracket: [") for line in lines)

    def test_realize_param(self, capsys):
        assert main(["realize-param", "--target", "1A"]) == EXIT_OK
        assert any(line.startswith("gamma: ") for line in output_lines(capsys))

    def test_realize_param_not_minimal(self):
        assert main(["realize-param", "--target", "21A"]) == EXIT_USAGE

    def test_realize_param_bad_window(self):
        assert main(["realize-param", "--target", "1A", "--window", "0.01"]) == EXIT_USAGE


class TestVerifyCommand:
    """Подкоманда verify на сохраненном состоянии"""

    def test_passing_state(self, tmp_path, capsys):
        path = save_state(synthetic_state(t=(6,)), tmp_path / "state.json")
        out = tmp_path / "report.json"
        code = main(["verify", "--state", str(path), "--gamma", "0", "--out", str(out)])
        assert code == EXIT_OK
        assert "== ce_windows" in capsys.readouterr().out
        data = json.loads(out.read_text(encoding="utf-8"))
        assert data["passed"] is True
        assert [r["name"] for r in data["reports"]] == [
            "ce_windows", "non_ce_witness", "recurrence",
        ]

    def test_non_dyadic_gamma(self, tmp_path):
        path = save_state(synthetic_state(t=(6,)), tmp_path / "state.json")
        out = tmp_path / "report.json"
        code = main(["verify", "--state", str(path), "--gamma", "1/300",
                     "--report", "recurrence,non_ce_witness", "--out", str(out)])
        assert code == EXIT_OK
        data = json.loads(out.read_text(encoding="utf-8"))
        assert [r["parameters"]["gamma"] for r in data["reports"]] == ["1/300", "1/300"]

    def test_sampled_parameters(self, tmp_path):
        path = save_state(synthetic_state(t=(4, 9)), tmp_path / "state.json")
        out = tmp_path / "report.json"
        code = main(["verify", "--state", str(path), "--samples", "4",
                     "--report", "recurrence", "--out", str(out)])
        assert code == EXIT_OK
        data = json.loads(out.read_text(encoding="utf-8"))
        assert len(data["reports"]) == 4

    def test_failing_state(self, tmp_path):
        state = synthetic_state(t=(4, 20), marks=(a_mark(2, 10),))
        path = save_state(state, tmp_path / "state.json")
        code = main(["verify", "--state", str(path), "--gamma", "0",
                     "--report", "non_ce_witness"])
        assert code == EXIT_FAILED

    def test_missing_state(self, tmp_path):
        assert main(["verify", "--state", str(tmp_path / "absent.json")]) == EXIT_USAGE

    def test_unknown_report(self, tmp_path):
        path = save_state(synthetic_state(t=(6,)), tmp_path / "state.json")
        assert main(["verify", "--state", str(path), "--report", "everything"]) == EXIT_USAGE


class TestOtherCommands:
    """pullback и construct"""

    def test_pullback_csv(self, tmp_path, capsys):
        out = tmp_path / "diam.csv"
        code = main(["pullback", "--policy", "leftmost", "--depth", "20", "--out", str(out)])
        assert code == EXIT_OK
        assert any(line.startswith("min fitted rate: ") for line in output_lines(capsys))
        with out.open(encoding="utf-8") as fh:
            rows = list(csv.reader(fh))
        assert rows[0] == ["n", "diam_n"]
        assert len(rows) == 22

    def test_pullback_dead_branch(self):
        code = main(["pullback", "--gamma", "1/64", "--policy", "itinerary", "--word", "3",
                     "--depth", "5"])
        assert code == EXIT_FAILED

    def test_construct_bad_schedule(self, tmp_path):
        code = main(["construct", "--schedule", "AX", "--out", str(tmp_path / "s.json")])
        assert code == EXIT_USAGE
