import json
import math

import pytest

from pitmanyor.cli import cli_main


def run_cli(capsys, *argv):
    code = cli_main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestEppfCommand:
    def test_json_value(self, capsys):
        code, out, _ = run_cli(
            capsys, "eppf", "--alpha", "1", "--d", "0.5", "--partition", "1,2|3"
        )
        assert code == 0
        doc = json.loads(out)
        assert doc["n"] == 3
        assert doc["partition"] == "1,2|3"
        assert math.isclose(doc["prob"], 0.125, rel_tol=1e-12)
        assert math.isclose(doc["log_prob"], math.log(0.125), rel_tol=1e-12)

    def test_canonicalizes_input(self, capsys):
        code, out, _ = run_cli(
            capsys, "eppf", "--alpha", "1", "--d", "0.5", "--partition", "3|2,1"
        )
        assert code == 0
        assert json.loads(out)["partition"] == "1,2|3"

    def test_csv_mode(self, capsys):
        code, out, _ = run_cli(
            capsys, "eppf", "--alpha", "1", "--d", "0.5", "--partition", "1|2", "--csv"
        )
        assert code == 0
        header, row = out.strip().split("\n")
        assert header == "alpha,d,n,partition,log_prob,prob"
        assert row.startswith("1.0,0.5,2,1|2,")

    def test_bad_partition_is_usage_error(self, capsys):
        code, _, err = run_cli(
            capsys, "eppf", "--alpha", "1", "--d", "0.5", "--partition", "1,3"
        )
        assert code == 2
        assert "error" in err

    def test_bad_params_is_usage_error(self, capsys):
        code, _, _ = run_cli(
            capsys, "eppf", "--alpha", "-2", "--d", "0.5", "--partition", "1"
        )
        assert code == 2


class TestSampleCommand:
    def test_default_lists_draws(self, capsys):
        code, out, _ = run_cli(
            capsys, "sample", "--method", "crp", "--alpha", "1", "--d", "0.5",
            "--n", "3", "--trials", "25", "--seed", "42",
        )
        assert code == 0
        doc = json.loads(out)
        assert len(doc["partitions"]) == 25

    def test_tabulate_counts(self, capsys):
        code, out, _ = run_cli(
            capsys, "sample", "--method", "stick", "--alpha", "1", "--d", "0.5",
            "--n", "4", "--trials", "1000", "--seed", "42", "--tabulate",
        )
        assert code == 0
        doc = json.loads(out)
        assert sum(doc["counts"].values()) == 1000

    def test_byte_identical_repeats(self, capsys):
        argv = ["sample", "--method", "stick", "--alpha", "1", "--d", "0.5",
                "--n", "4", "--trials", "1000", "--seed", "42"]
        _, first, _ = run_cli(capsys, *argv)
        _, second, _ = run_cli(capsys, *argv)
        assert first == second

    def test_csv_tabulate(self, capsys):
        code, out, _ = run_cli(
            capsys, "sample", "--method", "crp", "--alpha", "1", "--d", "0",
            "--n", "2", "--trials", "50", "--seed", "1", "--tabulate", "--csv",
        )
        assert code == 0
        lines = out.strip().split("\n")
        assert lines[0] == "partition,count,freq"
        assert sum(int(line.split(",")[-2]) for line in lines[1:]) == 50

    def test_n_too_large_for_tabulation(self, capsys):
        code, _, err = run_cli(
            capsys, "sample", "--method", "crp", "--alpha", "1", "--d", "0.5",
            "--n", "11", "--trials", "10",
        )
        assert code == 2
        assert "error" in err


class TestVerifyCommand:
    def test_passing_suite_exits_zero(self, capsys):
        code, out, err = run_cli(capsys, "verify", "--suite", "lemmaC")
        assert code == 0
        report = json.loads(out)
        assert report["passed"] is True
        assert "[PASS]" in err

    def test_known_failing_suite_exits_one(self, capsys):
        code, out, err = run_cli(capsys, "verify", "--suite", "lemmaB")
        assert code == 1
        report = json.loads(out)
        assert report["failures"] == 1
        assert "[FAIL] lemma_b_bridge_at_60" in err

    def test_byte_identical_repeats(self, capsys):
        argv = ["verify", "--suite", "lemmaC", "--seed", "5"]
        _, first, _ = run_cli(capsys, *argv)
        _, second, _ = run_cli(capsys, *argv)
        assert first == second

    def test_alpha_without_d_is_usage_error(self, capsys):
        code, _, _ = run_cli(capsys, "verify", "--suite", "normalization", "--alpha", "1")
        assert code == 2


class TestGrowthCommand:
    def test_json_output(self, capsys):
        code, out, _ = run_cli(
            capsys, "growth", "--alpha", "1", "--d", "0.5",
            "--ngrid", "100,1000", "--trials", "50", "--seed", "7",
        )
        assert code == 0
        doc = json.loads(out)
        assert [r["n"] for r in doc["records"]] == [100, 1000]
        assert isinstance(doc["exponent"], float)

    def test_csv_output(self, capsys):
        code, out, _ = run_cli(
            capsys, "growth", "--alpha", "1", "--d", "0.5",
            "--ngrid", "100,1000", "--trials", "50", "--seed", "7", "--csv",
        )
        assert code == 0
        lines = out.strip().split("\n")
        assert lines[0] == "n,mean_kn,se,trials"
        assert len(lines) == 3

    def test_bad_grid_is_usage_error(self, capsys):
        code, _, _ = run_cli(
            capsys, "growth", "--alpha", "1", "--d", "0.5", "--ngrid", "10,abc"
        )
        assert code == 2


class TestUsageErrors:
    def test_unknown_subcommand(self, capsys):
        assert run_cli(capsys, "bogus")[0] == 2

    def test_no_subcommand(self, capsys):
        assert run_cli(capsys)[0] == 2

    def test_unknown_flag(self, capsys):
        code, _, _ = run_cli(
            capsys, "eppf", "--alpha", "1", "--d", "0.5", "--partition", "1", "--nope"
        )
        assert code == 2

    def test_help_exits_zero(self, capsys):
        assert run_cli(capsys, "--help")[0] == 0


class TestAtomicOutput:
    def test_out_file_matches_stdout(self, capsys, tmp_path):
        target = tmp_path / "report.json"
        argv = ["eppf", "--alpha", "1", "--d", "0.5", "--partition", "1,2|3"]
        _, stdout_doc, _ = run_cli(capsys, *argv)
        code, out, _ = run_cli(capsys, *argv, "--out", str(target))
        assert code == 0
        assert out == ""  # document went to the file instead
        assert target.read_text() == stdout_doc
