import csv
import io
import json
import subprocess
import sys

import pytest

from qicausality.bounds import naive_p, q_prime, solve_p_prime, teleport_p
from qicausality.cli import BOUNDS_HEADER, FIG2_HEADER, fmt, main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def strip_manifest(text):
    payload = json.loads(text)
    payload.pop("manifest")
    return payload


class TestBounds:
    def test_header_and_row(self, capsys):
        code, out, _ = run(capsys, "bounds", "--m", "1", "--n-list", "4")
        assert code == 0
        lines = out.splitlines()
        assert lines[0] == "n,m,p_naive,p_teleport,p_prime,q_prime"
        assert lines[1] == f"4,1,0.4375000000,0.5625000000,{fmt(solve_p_prime(1, 4))},0.6250000000"

    def test_m_zero(self, capsys):
        _, out, _ = run(capsys, "bounds", "--m", "0", "--n-list", "5")
        assert rows(out)[0]["p_prime"] == "0.2500000000"

    def test_agrees_with_module(self, capsys):
        _, out, _ = run(capsys, "bounds", "--m", "2", "--n-list", "3,7,50")
        for row in rows(out):
            n = int(row["n"])
            assert row["p_naive"] == fmt(naive_p(2, n))
            assert row["p_teleport"] == fmt(teleport_p(n))
            assert row["p_prime"] == fmt(solve_p_prime(2, n))
            assert row["q_prime"] == fmt(q_prime(n))
        assert tuple(rows(out)[0].keys()) == BOUNDS_HEADER

    @pytest.mark.parametrize(
        "argv",
        [["--n-list", ""], ["--m", "3", "--n-list", "2"], ["--n-list", "a,b"], ["--bogus"]],
        ids=["empty", "m>n", "not-int", "unknown-flag"],
    )
    def test_usage_errors(self, capsys, argv):
        code, _, _ = run(capsys, "bounds", *argv)
        assert code == 2

    def test_out_writes_manifest(self, capsys, tmp_path):
        out = tmp_path / "b.csv"
        code, text, _ = run(capsys, "bounds", "--n", "4", "--out", str(out))
        assert code == 0 and out.read_text() == text
        manifest = json.loads((tmp_path / "b.csv.manifest.json").read_text())
        assert manifest["command"] == "bounds"


class TestSimulate:
    def test_naive_exact(self, capsys):
        code, out, _ = run(capsys, "simulate", "--strategy", "naive", "--n", "4", "--m", "1")
        payload = json.loads(out)
        assert code == 0
        assert payload["p_hat"] == pytest.approx(0.4375, abs=1e-12)
        assert payload["std_err"] == 0
        assert payload["mode"] == "exact"
        assert set(payload) == {"p_hat", "std_err", "trials", "mode", "manifest"}

    def test_teleport_exact(self, capsys):
        _, out, _ = run(capsys, "simulate", "--strategy", "teleport", "--n", "2")
        assert json.loads(out)["p_hat"] == pytest.approx(0.7285533906, abs=1e-9)

    def test_manifest(self, capsys):
        _, out, _ = run(capsys, "simulate", "--strategy", "naive", "--n", "4", "--seed", "9")
        manifest = json.loads(out)["manifest"]
        assert manifest["command"] == "simulate" and manifest["seed"] == 9
        assert {"toolkit_version", "started", "finished", "flags"} <= set(manifest)

    def test_reproducible(self, capsys):
        argv = ["simulate", "--strategy", "channel:0.7,0.4,1.0", "--n", "3", "--mode", "mc", "--trials", "20000", "--version", "2", "--seed", "3"]
        _, first, _ = run(capsys, *argv)
        _, second, _ = run(capsys, *argv)
        assert strip_manifest(first) == strip_manifest(second)
        assert json.loads(first)["std_err"] > 0

    def test_unsupported_earac(self, capsys):
        code, _, err = run(capsys, "simulate", "--strategy", "teleport", "--n", "5")
        assert code == 3 and "unsupported" in err

    def test_teleport_needs_m1(self, capsys):
        code, _, _ = run(capsys, "simulate", "--strategy", "teleport", "--n", "4", "--m", "2")
        assert code == 3

    @pytest.mark.parametrize(
        "argv",
        [
            ["--strategy", "wizard", "--n", "3"],
            ["--strategy", "channel:0.5", "--n", "3"],
            ["--strategy", "channel:0.1,0.5,0.5", "--n", "3"],
            ["--strategy", "naive", "--n", "3", "--mode", "fast"],
            ["--strategy", "naive", "--n", "3", "--version", "3"],
            ["--strategy", "naive", "--n", "3", "--m", "4"],
            ["--strategy", "naive"],
        ],
    )
    def test_usage_errors(self, capsys, argv):
        code, _, _ = run(capsys, "simulate", *argv)
        assert code == 2


class TestFuzz:
    def test_clean_run(self, capsys):
        code, out, _ = run(capsys, "fuzz", "--suite", "qicchain", "--trials", "50")
        payload = json.loads(out)
        assert code == 0 and payload["violation_count"] == 0 and payload["violations"] == []

    def test_corrupted_entropy(self, capsys):
        code, out, _ = run(capsys, "fuzz", "--suite", "qicchain", "--trials", "5", "--corrupt-entropy")
        payload = json.loads(out)
        assert code == 1
        assert payload["violation_count"] >= 1
        assert payload["violations"][0]["fingerprint"] == [0, payload["violations"][0]["trial"]]

    def test_hidden_flag_not_in_help(self, capsys):
        code, out, _ = run(capsys, "fuzz", "--help")
        assert code == 0 and "--suite" in out and "corrupt" not in out

    @pytest.mark.parametrize("argv", [["--suite", "bogus"], ["--suite", "classical", "--max-dim", "5"], []])
    def test_usage_errors(self, capsys, argv):
        code, _, _ = run(capsys, "fuzz", *argv)
        assert code == 2


class TestFig2:
    def test_rows(self, capsys, tmp_path):
        out = tmp_path / "fig2.csv"
        assert run(capsys, "fig2", "--n-max", "6", "--out", str(out))[0] == 0
        data = rows(out.read_text())
        assert [int(r["n"]) for r in data] == [2, 3, 4, 5, 6]
        assert tuple(data[0].keys()) == FIG2_HEADER
        row4 = data[2]
        assert (row4["p_naive"], row4["p_teleport"], row4["p_prime"]) == ("0.4375000000", "0.5625000000", fmt(solve_p_prime(1, 4)))
        manifest = json.loads((tmp_path / "fig2.csv.manifest.json").read_text())
        assert manifest["flags"]["n_max"] == 6

    def test_unwritable(self, capsys, tmp_path):
        code, _, _ = run(capsys, "fig2", "--n-max", "4", "--out", str(tmp_path / "missing" / "x.csv"))
        assert code == 4

    def test_n_max_too_small(self, capsys, tmp_path):
        assert run(capsys, "fig2", "--n-max", "1", "--out", str(tmp_path / "x.csv"))[0] == 2


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "qicausality", "bounds", "--n", "9"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout.splitlines()[1].endswith("0.5000000000")


def test_missing_subcommand(capsys):
    assert run(capsys)[0] == 2
