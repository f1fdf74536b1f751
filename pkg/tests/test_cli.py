"""CLI argument parsing, rendering formats, and exit codes."""

import argparse
import csv
import json

import pytest

from ellcauchy import cli


class TestParseComplex:
    @pytest.mark.parametrize(
        "text,value",
        [
            ("0.3+0.7i", 0.3 + 0.7j),
            ("0.3+0.7j", 0.3 + 0.7j),
            ("-1.5-2e-1i", -1.5 - 0.2j),
            ("2.0", 2.0 + 0j),
            ("-3", -3 + 0j),
        ],
    )
    def test_accepted(self, text, value):
        assert cli._parse_complex(text) == value

    @pytest.mark.parametrize("text", ["abc", "1+i", "0.3 + 0.7i", ""])
    def test_rejected(self, text):
        with pytest.raises(argparse.ArgumentTypeError):
            cli._parse_complex(text)


class TestParseArgs:
    def test_defaults(self):
        args = cli.parse_args(["verify-all"])
        assert args.command == "verify-all"
        assert args.n == list(range(1, 9))
        assert args.trials == 10
        assert args.seed == 42
        assert args.tau == 0.3 + 0.7j
        assert args.kernel == "all" and args.format == "text"

    def test_verify_requires_known_identity(self):
        with pytest.raises(SystemExit) as exc:
            cli.parse_args(["verify", "bogus"])
        assert exc.value.code == 2

    def test_missing_command(self):
        with pytest.raises(SystemExit):
            cli.parse_args([])


class TestMain:
    def test_verify_single_identity(self, capsys):
        assert cli.main(["verify", "gauss", "--n", "3", "--trials", "2"]) == 0
        out = capsys.readouterr().out
        assert "gauss" in out and "0 failed" in out

    def test_forced_failure_exits_one(self):
        assert cli.main(["verify", "determinant", "--n", "2", "--trials", "1", "--tol", "1e-30"]) == 1

    def test_list(self, capsys):
        assert cli.main(["list"]) == 0
        out = capsys.readouterr().out
        for name in ("determinant", "inverse", "gauss", "monodromy"):
            assert name in out

    def test_json_report(self, tmp_path):
        out = tmp_path / "rep.json"
        code = cli.main(
            ["verify", "product", "--n", "2", "--trials", "1", "--format", "json", "--out", str(out)]
        )
        assert code == 0
        records = json.loads(out.read_text())
        assert records and all(r["passed"] for r in records)
        assert list(records[0]) == [
            "identity_name", "kernel", "n", "seed",
            "abs_residual", "rel_residual", "tolerance", "passed", "elapsed_ms",
        ]

    def test_json_deterministic_modulo_timing(self, tmp_path):
        outs = []
        for name in ("a.json", "b.json"):
            path = tmp_path / name
            assert cli.main(
                ["verify", "inverse", "--n", "3", "--trials", "2", "--format", "json", "--out", str(path)]
            ) == 0
            records = json.loads(path.read_text())
            for r in records:
                del r["elapsed_ms"]
            outs.append(records)
        assert outs[0] == outs[1]

    def test_csv_report(self, tmp_path):
        out = tmp_path / "rep.csv"
        assert cli.main(
            ["degeneration", "--format", "csv", "--out", str(out)]
        ) == 0
        rows = list(csv.reader(out.read_text().splitlines()))
        assert rows[0][0] == "identity_name"
        assert len(rows) == 3  # header + two limit checks

    def test_kernel_filter_flag(self, tmp_path):
        out = tmp_path / "rep.json"
        assert cli.main(
            ["verify", "product", "--n", "2", "--trials", "1",
             "--kernel", "rational", "--format", "json", "--out", str(out)]
        ) == 0
        kernels = {r["kernel"] for r in json.loads(out.read_text())}
        assert kernels == {"rational", "k-rational"}

    def test_bench_smoke(self, capsys):
        assert cli.main(["bench"]) == 0
        out = capsys.readouterr().out
        assert "sigma x2000" in out and "n=32" in out
