import json
import os
import subprocess
import sys

import pytest

from uncertain_learning.cli import EXIT_INVALID, EXIT_IO, EXIT_OK, main

LOW = """\
seed: 3
agents: 4
steps: 300
trials: 2
evidence: low
graph:
  type: ring
"""


@pytest.fixture
def write(tmp_path):
    def _write(text, name="exp.yaml"):
        path = tmp_path / name
        path.write_text(text)
        return str(path)
    return _write


class TestRun:
    def test_creates_three_files(self, write, tmp_path, capsys):
        out = tmp_path / "out"
        assert main(["run", "--config", write(LOW), "--out", str(out)]) == EXIT_OK
        assert sorted(p.name for p in out.iterdir()) == ["curves.csv", "manifest.json", "table.csv"]
        manifest = json.loads((out / "manifest.json").read_text())
        assert manifest["master_seed"] == 3 and len(manifest["trial_seeds"]) == 2
        assert manifest["config"]["agent_count"] == 4
        assert "mean_final_point" in capsys.readouterr().out

    def test_reproducible(self, write, tmp_path):
        cfg = write(LOW)
        for name in ("a", "b"):
            assert main(["run", "--config", cfg, "--out", str(tmp_path / name), "--seed", "11"]) == EXIT_OK
        for f in ("curves.csv", "table.csv"):
            assert (tmp_path / "a" / f).read_bytes() == (tmp_path / "b" / f).read_bytes()

    def test_seed_override_changes_output(self, write, tmp_path):
        cfg = write(LOW)
        main(["run", "--config", cfg, "--out", str(tmp_path / "a")])
        main(["run", "--config", cfg, "--out", str(tmp_path / "b"), "--seed", "4"])
        assert (tmp_path / "a" / "curves.csv").read_bytes() != (tmp_path / "b" / "curves.csv").read_bytes()
        assert json.loads((tmp_path / "b" / "manifest.json").read_text())["master_seed"] == 4

    def test_negative_R(self, write, tmp_path, capsys):
        cfg = write(LOW.replace("evidence: low", "evidence:\n  regime: explicit\n  range: [-3, 10]"))
        assert main(["run", "--config", cfg, "--out", str(tmp_path / "o")]) == EXIT_INVALID
        err = capsys.readouterr().err
        assert "evidence.range" in err and "exp.yaml:7:" in err
        assert not (tmp_path / "o").exists()

    def test_missing_config(self, tmp_path):
        assert main(["run", "--config", str(tmp_path / "nope.yaml"), "--out", str(tmp_path)]) == EXIT_IO

    @pytest.mark.skipif(hasattr(os, "geteuid") and os.geteuid() == 0, reason="root ignores permissions")
    def test_unwritable_out(self, write, tmp_path):
        locked = tmp_path / "locked"
        locked.mkdir()
        locked.chmod(0o500)
        try:
            assert main(["run", "--config", write(LOW), "--out", str(locked / "x")]) == EXIT_IO
        finally:
            locked.chmod(0o700)

    def test_out_is_a_file(self, write, tmp_path):
        blocker = tmp_path / "file"
        blocker.write_text("")
        assert main(["run", "--config", write(LOW), "--out", str(blocker / "sub")]) == EXIT_IO


class TestCheck:
    def test_ring(self, write, capsys):
        assert main(["check", "--config", write(LOW)]) == EXIT_OK
        out = capsys.readouterr().out
        assert "delta = 1.0 " in out and "B-strongly connected: yes" in out

    def test_self_loops(self, write, capsys):
        assert main(["check", "--config", write("agents: 3\ngraph:\n  type: self_loops\n")]) == EXIT_INVALID
        assert "B-strongly connected: no" in capsys.readouterr().out

    def test_alternating_pair(self, write):
        text = "agents: 2\ngraph:\n  type: cyclic\n  window: 2\n  snapshots: [[[0, 1]], [[1, 0]]]\n"
        assert main(["check", "--config", write(text)]) == EXIT_OK
        text = text.replace("window: 2", "window: 1")
        assert main(["check", "--config", write(text)]) == EXIT_INVALID

    def test_random(self, write):
        assert main(["check", "--config", write("agents: 6\ngraph:\n  type: random\n  window: 3\n")]) == EXIT_OK


class TestProp1:
    ARGS = ["prop1", "--p-star", "0.6,0.4", "--p-alt", "0.55,0.45", "--trials", "100", "--seed", "1", "--steps", "2000"]

    def test_zero_evidence_for_truth(self, capsys):
        assert main(self.ARGS + ["--r1", "100", "--r2", "0"]) == EXIT_OK
        out = capsys.readouterr().out
        assert float(out.split("flip probability: ")[1].split()[0]) > 0

    def test_huge_equal_evidence(self, capsys):
        args = ["prop1", "--p-star", "0.6,0.4", "--p-alt", "0.3,0.7", "--r1", "1000000", "--r2", "1000000",
                "--trials", "100", "--seed", "1"]
        assert main(args) == EXIT_OK
        out = capsys.readouterr().out
        assert "flip probability: 0.0000" in out

    @pytest.mark.parametrize("bad", [
        ["--p-star", "0.6,0.5"],
        ["--p-star", "0.6,abc"],
        ["--trials", "0"],
        ["--r1", "-1"],
    ])
    def test_usage_errors(self, bad, capsys):
        args = self.ARGS + ["--r1", "100", "--r2", "0"]
        flag = bad[0]
        i = args.index(flag)
        args[i + 1] = bad[1]
        assert main(args) == EXIT_INVALID
        assert "error" in capsys.readouterr().err


def test_missing_subcommand():
    assert main([]) == EXIT_INVALID


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "uncertain_learning", "--version"], capture_output=True, text=True)
    assert res.returncode == 0 and res.stdout.strip()
