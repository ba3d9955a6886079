import json
import subprocess
import sys

import pytest

from gossipsim.cli import main


def run_cli(*argv, capsys=None):
    code = main(list(argv))
    out, err = capsys.readouterr() if capsys else ("", "")
    return code, out, err


class TestRunCommand:
    def test_text_matches_reference_table(self, capsys):
        code, out, _ = run_cli("run", "--n", "4", "--strategy", "identity",
                               "--format", "text", capsys=capsys)
        assert code == 0
        lines = out.splitlines()
        assert lines[0] == "0: S1 S2 S3 S4 R1 - R2 - - - R3 - - - R4 - - -"
        assert lines[4] == "4: - - - R0 - - - R1 - - R2 - - R3 S0 S1 S2 S3"
        assert "lambda=18 mu=2.22 epsilon=44.44%" in out

    def test_csv_dimensions(self, capsys):
        code, out, _ = run_cli("run", "--n", "9", "--strategy", "pipelined",
                               "--format", "csv", capsys=capsys)
        assert code == 0
        rows = [l for l in out.splitlines() if l and not l.startswith("#")]
        assert len(rows) == 11  # header + 10 processors
        assert all(len(r.split(",")) == 28 for r in rows)

    def test_json_format(self, capsys):
        code, out, _ = run_cli("run", "--n", "3", "--strategy", "pipelined",
                               "--format", "json", capsys=capsys)
        assert code == 0
        payload = json.loads(out)
        assert payload["lambda"] == 9
        assert payload["n"] == 3

    def test_rejects_n_zero(self, capsys):
        code, _, err = run_cli("run", "--n", "0", "--strategy", "identity",
                               capsys=capsys)
        assert code == 2
        assert "n must be >= 1" in err

    def test_rejects_unknown_strategy(self, capsys):
        code, _, err = run_cli("run", "--n", "3", "--strategy", "sideways",
                               capsys=capsys)
        assert code == 2
        assert "sideways" in err

    def test_pgm_requires_out(self, capsys):
        code, _, err = run_cli("run", "--n", "3", "--strategy", "identity",
                               "--format", "pgm", capsys=capsys)
        assert code == 2
        assert "--out" in err

    def test_pgm_written(self, tmp_path, capsys):
        out_file = tmp_path / "run.pgm"
        code, out, _ = run_cli("run", "--n", "1", "--strategy", "identity",
                               "--format", "pgm", "--out", str(out_file),
                               capsys=capsys)
        assert code == 0
        assert out_file.read_bytes() == b"P5\n2 2\n255\n" + bytes([0, 128, 128, 0])
        assert "lambda=2" in out

    def test_custom_permutation_file(self, tmp_path, capsys):
        perm_file = tmp_path / "perms.txt"
        perm_file.write_text("0: 1,2\n1: 2,0\n2: 0,1\n")
        code, out, _ = run_cli("run", "--n", "2", "--strategy",
                               f"custom:{perm_file}", capsys=capsys)
        assert code == 0
        assert "lambda=6" in out

    def test_invalid_custom_file_is_usage_error(self, tmp_path, capsys):
        perm_file = tmp_path / "perms.txt"
        perm_file.write_text("0: 1,1\n1: 0,2\n2: 0,1\n")
        code, _, err = run_cli("run", "--n", "2", "--strategy",
                               f"custom:{perm_file}", capsys=capsys)
        assert code == 2
        assert "duplicate" in err

    def test_sessions_flag(self, capsys):
        code, out, _ = run_cli("run", "--n", "4", "--strategy", "pipelined",
                               "--sessions", "10", capsys=capsys)
        assert code == 0
        assert "lambda=102" in out

    def test_optimize_flag(self, capsys):
        code, out, _ = run_cli("run", "--n", "7", "--strategy", "identity",
                               "--optimize", capsys=capsys)
        assert code == 0
        assert "lambda=19" in out
        assert "epsilon=73.68%" in out


class TestSweepCommand:
    def test_identity_rows(self, capsys):
        code, out, _ = run_cli("sweep", "--strategy", "identity",
                               "--n-min", "1", "--n-max", "10", capsys=capsys)
        assert code == 0
        lines = out.splitlines()
        assert lines[0] == "strategy,n,seed,lambda,mu,epsilon"
        row4 = next(l for l in lines if l.startswith("identity,4,"))
        assert row4.split(",")[3] == "18"

    def test_pipelined_lambda_column(self, capsys):
        code, out, _ = run_cli("sweep", "--strategy", "pipelined",
                               "--n-min", "2", "--n-max", "10", capsys=capsys)
        assert code == 0
        for line in out.splitlines()[1:]:
            parts = line.split(",")
            assert int(parts[3]) == 3 * int(parts[1])

    def test_optimized_identity_epsilon(self, capsys):
        code, out, _ = run_cli("sweep", "--strategy", "identity",
                               "--n-min", "7", "--n-max", "7", "--optimize",
                               capsys=capsys)
        assert code == 0
        row = out.splitlines()[1]
        assert row.startswith("identity+opt,7,")
        assert row.split(",")[5] == "0.736842"

    def test_bad_range(self, capsys):
        code, _, err = run_cli("sweep", "--strategy", "identity",
                               "--n-min", "9", "--n-max", "3", capsys=capsys)
        assert code == 2
        assert "bad range" in err

    def test_output_file_and_seeds(self, tmp_path, capsys):
        out_file = tmp_path / "sweep.csv"
        code, _, _ = run_cli("sweep", "--strategy", "random", "--n-min", "3",
                             "--n-max", "4", "--seeds", "5,6",
                             "--out", str(out_file), capsys=capsys)
        assert code == 0
        lines = out_file.read_text().splitlines()
        assert len(lines) == 5  # header + 2 sizes x 2 seeds
        assert lines[1].split(",")[2] == "5"


class TestValidateCommand:
    def test_default_propositions_pass(self, capsys):
        code, out, _ = run_cli("validate", "--n-max", "10", capsys=capsys)
        assert code == 0
        assert "closed-form propositions" in out

    def test_golden_only(self, capsys):
        code, out, _ = run_cli("validate", "--golden", capsys=capsys)
        assert code == 0
        assert "golden run-table regression" in out
        assert "closed-form" not in out

    def test_flags_compose(self, capsys):
        code, out, _ = run_cli("validate", "--n-max", "5", "--golden",
                               capsys=capsys)
        assert code == 0
        assert "closed-form propositions" in out
        assert "golden run-table regression" in out


def test_module_entry_point_smoke():
    proc = subprocess.run(
        [sys.executable, "-m", "gossipsim", "run", "--n", "2",
         "--strategy", "identity"],
        capture_output=True, text=True, timeout=120,
    )
    assert proc.returncode == 0
    assert "lambda=6" in proc.stdout
