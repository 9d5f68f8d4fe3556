import json
import subprocess
import sys

import numpy as np
import pytest

from spenra.series import read_csv

CLI = [sys.executable, "-m", "spenra.cli"]


def run(*args, **kw):
    return subprocess.run(
        CLI + [str(a) for a in args], capture_output=True, text=True, **kw
    )


@pytest.fixture(scope="module")
def markov_csv(tmp_path_factory):
    path = tmp_path_factory.mktemp("data") / "markov.csv"
    r = run("generate", "--system", "markov2", "--n", 200, "--seed", 3,
            "--output", path)
    assert r.returncode == 0, r.stderr
    return path


class TestGenerate:
    def test_markov2_roundtrip(self, markov_csv):
        s = read_csv(markov_csv)
        assert len(s) == 200
        assert s.timestamps is None

    def test_deterministic_output(self, tmp_path):
        paths = [tmp_path / f"{i}.csv" for i in range(2)]
        for p in paths:
            run("generate", "--system", "markov2", "--n", 50, "--seed", 9,
                "--output", p)
        assert paths[0].read_bytes() == paths[1].read_bytes()

    def test_iei_has_timestamps(self, tmp_path):
        out = tmp_path / "iei.csv"
        r = run("generate", "--system", "lorenz-iei", "--n", 30, "--seed", 0,
                "--output", out)
        assert r.returncode == 0, r.stderr
        s = read_csv(out)
        assert s.timestamps is not None
        assert np.all(np.diff(s.timestamps) > 0)

    def test_manifest_written(self, markov_csv):
        manifest = markov_csv.with_suffix(".csv.manifest.json")
        meta = json.loads(manifest.read_text())
        assert meta["seed"] == 3
        assert "command_line" in meta and "spenra_version" in meta

    def test_unknown_system_exits_2(self, tmp_path):
        r = run("generate", "--system", "henon", "--n", 10,
                "--output", tmp_path / "x.csv")
        assert r.returncode == 2


class TestEstimate:
    def test_fixed_bandwidths_on_markov(self, markov_csv, tmp_path):
        out = tmp_path / "h.csv"
        r = run("estimate", "--input", markov_csv, "--p", 2,
                "--bandwidths", "0.5,1.0,1.0", "--output", out)
        assert r.returncode == 0, r.stderr
        assert "time_averaged" in r.stdout
        header = out.read_text().splitlines()[0]
        assert header == "t,time,value,h_specific"

    def test_estimate_deterministic(self, markov_csv, tmp_path):
        outs = [tmp_path / f"h{i}.csv" for i in range(2)]
        for o in outs:
            run("estimate", "--input", markov_csv, "--p", 1,
                "--bandwidths", "0.5,1.0", "--output", o)
        assert outs[0].read_bytes() == outs[1].read_bytes()

    def test_missing_bandwidths_and_auto_exits_2(self, markov_csv, tmp_path):
        r = run("estimate", "--input", markov_csv, "--p", 2,
                "--output", tmp_path / "h.csv")
        assert r.returncode == 2

    def test_wrong_bandwidth_count_exits_2(self, markov_csv, tmp_path):
        r = run("estimate", "--input", markov_csv, "--p", 2,
                "--bandwidths", "0.5,1.0", "--output", tmp_path / "h.csv")
        assert r.returncode == 2

    def test_window_requires_timestamps(self, markov_csv, tmp_path):
        r = run("estimate", "--input", markov_csv, "--p", 1,
                "--bandwidths", "0.5,1.0", "--window", 10,
                "--output", tmp_path / "h.csv")
        assert r.returncode == 3
        assert r.stderr.strip()


class TestSelect:
    def test_max_p_one(self, tmp_path):
        data = tmp_path / "d.csv"
        run("generate", "--system", "markov2", "--n", 150, "--seed", 5,
            "--output", data)
        out = tmp_path / "report.csv"
        r = run("select", "--input", data, "--max-p", 1, "--seed", 1,
                "--output", out)
        assert r.returncode == 0, r.stderr
        assert "chosen_order=1" in r.stdout
        lines = out.read_text().splitlines()
        assert lines[0] == "p,k0,k-1,cv0,cvl"
        assert "# chosen_order=1" in lines


class TestClassic:
    def test_phi_norm_identity_r_half(self, markov_csv):
        # at r=0.5 the box-volume term vanishes: phi-norm equals raw phi
        r1 = run("classic", "--input", markov_csv, "--estimator", "phi-norm",
                 "--p", 2, "--r", 0.5)
        assert r1.returncode == 0, r1.stderr
        fields = r1.stdout.strip().split(",")
        assert fields[0] == "phi-norm"
        float(fields[-1])

    def test_apen_nonnegative_on_noise(self, markov_csv):
        r = run("classic", "--input", markov_csv, "--estimator", "apen",
                "--p", 2, "--r", 3.0)
        assert r.returncode == 0
        assert float(r.stdout.strip().split(",")[-1]) >= 0.0

    def test_sampen_runs(self, markov_csv):
        r = run("classic", "--input", markov_csv, "--estimator", "sampen",
                "--p", 1, "--r", 3.0)
        assert r.returncode == 0
        float(r.stdout.strip().split(",")[-1])


class TestFailureModes:
    def test_missing_input_exits_3(self, tmp_path):
        r = run("estimate", "--input", tmp_path / "nope.csv", "--p", 1,
                "--bandwidths", "1,1", "--output", tmp_path / "h.csv")
        assert r.returncode == 3
        assert r.stderr.strip()

    def test_truncated_input_exits_3(self, tmp_path):
        bad = tmp_path / "bad.csv"
        bad.write_text("value\n1.0\n2.0\nnot-a-number\n")
        r = run("estimate", "--input", bad, "--p", 1,
                "--bandwidths", "1,1", "--output", tmp_path / "h.csv")
        assert r.returncode == 3

    def test_no_subcommand_exits_2(self):
        r = run()
        assert r.returncode == 2
