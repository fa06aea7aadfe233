import csv
import io
import subprocess
import sys

import pytest

from hybridqmc.cli import EXIT_FAILED, EXIT_INVALID, EXIT_IO, EXIT_OK, load_config, main
from hybridqmc.pointset import read_rule


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


MINIMAL = ("--b", "2", "--s1", "1", "--s2", "1", "--gamma1", "const:1", "--gamma2", "const:1",
           "--alpha1", "2", "--alpha2", "2")


class TestConstruct:
    def test_minimal_config(self, tmp_path):
        rule_path, trace_path = tmp_path / "r.txt", tmp_path / "t.csv"
        code, _ = run("construct", *MINIMAL, "--m", "2", "--out", str(rule_path),
                      "--trace", str(trace_path))
        assert code == EXIT_OK
        rule = read_rule(rule_path)
        assert [g.to_digits() for g in rule.g] == ["1"] and rule.z == (1,)
        rows = list(csv.reader(trace_path.open(newline="")))
        assert rows[0] == ["step", "d1", "d2", "kind", "choice", "e2", "bound"]
        assert len(rows) == 3

    def test_rule_on_stdout(self):
        code, out = run("construct", *MINIMAL, "--m", "3")
        assert code == EXIT_OK and out.startswith("b=2\nm=3\n")

    def test_m_range_rejected(self):
        assert run("construct", *MINIMAL, "--m", "1:3")[0] == EXIT_INVALID

    def test_config_file(self, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("# desk run\nb=3\nm=2\ns1=2\ns2=1\ngamma1=power:1,2\ngamma2=const:0.5\n")
        code, out = run("construct", "--config", str(cfg))
        assert code == EXIT_OK and out.startswith("b=3\nm=2\n")
        code, out = run("construct", "--config", str(cfg), "--m", "1")
        assert out.startswith("b=3\nm=1\n")

    @pytest.mark.parametrize("bad", [("--b", "4"), ("--alpha1", "1"), ("--gamma1", "const:-1"),
                                     ("--gamma2", "bogus"), ("--workers", "0"),
                                     ("--strategy", "zigzag"), ("--s1", "0")])
    def test_invalid_config(self, bad):
        assert run("construct", *MINIMAL, "--m", "2", *bad)[0] == EXIT_INVALID

    def test_unknown_config_key(self, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("colour=blue\n")
        assert run("construct", "--config", str(cfg), "--m", "2")[0] == EXIT_INVALID

    def test_missing_config_file(self, tmp_path):
        assert run("construct", "--config", str(tmp_path / "nope"), "--m", "2")[0] == EXIT_IO

    def test_unwritable_output(self, tmp_path):
        target = tmp_path / "missing-dir" / "r.txt"
        assert run("construct", *MINIMAL, "--m", "2", "--out", str(target))[0] == EXIT_IO

    def test_byte_identical_reruns(self, tmp_path):
        outs = []
        for k, workers in enumerate(("1", "3")):
            r, t = tmp_path / f"r{k}", tmp_path / f"t{k}"
            run("construct", "--m", "9", "--s1", "3", "--s2", "3", "--workers", workers,
                "--out", str(r), "--trace", str(t))
            outs.append((r.read_bytes(), t.read_bytes()))
        assert outs[0] == outs[1]


class TestError:
    def _rule(self, tmp_path, *extra):
        path = tmp_path / "r.txt"
        run("construct", *MINIMAL, "--m", "4", "--out", str(path), *extra)
        return path

    def test_round_trip_report(self, tmp_path):
        path = self._rule(tmp_path, "--trace", str(tmp_path / "t.csv"))
        code, out = run("error", *MINIMAL, "--rule", str(path))
        assert code == EXIT_OK
        lines = dict(line.split("=", 1) for line in out.splitlines() if "=" in line
                     and not line.startswith("N="))
        last = (tmp_path / "t.csv").read_text().splitlines()[-1].split(",")
        assert lines["e2"] == last[5]
        assert float(lines["lower"]) <= float(lines["e2"]) <= float(lines["upper"])
        assert "sandwich: ok" in out

    def test_csv_row(self, tmp_path):
        path = self._rule(tmp_path)
        csv_path = tmp_path / "e.csv"
        assert run("error", *MINIMAL, "--rule", str(path), "--out", str(csv_path))[0] == EXIT_OK
        rows = list(csv.reader(csv_path.open(newline="")))
        assert rows[0] == ["m", "N", "e2", "lower", "upper", "ratio"] and rows[1][:2] == ["4", "16"]

    def test_zero_weights(self, tmp_path):
        path = self._rule(tmp_path)
        code, out = run("error", "--rule", str(path), "--gamma1", "const:0", "--gamma2", "const:0")
        assert code == EXIT_OK and "e2=0\n" in out

    def test_tampered_rule(self, tmp_path):
        path = tmp_path / "r.txt"
        path.write_text("b=2\nm=2\nf=111\ng=1\nz=2\n")
        assert run("error", "--rule", str(path))[0] == EXIT_INVALID

    def test_dimension_mismatch(self, tmp_path):
        path = self._rule(tmp_path)
        assert run("error", "--rule", str(path), "--s1", "3")[0] == EXIT_INVALID
        assert run("error", "--rule", str(path), "--m", "5")[0] == EXIT_INVALID

    def test_missing_rule(self, tmp_path):
        assert run("error", "--rule", str(tmp_path / "nope.txt"))[0] == EXIT_IO
        assert run("error")[0] == EXIT_INVALID


class TestTable:
    def test_columns_and_sandwich(self):
        code, out = run("table", "--m", "1:7", "--s1", "2", "--s2", "2")
        assert code == EXIT_OK
        rows = list(csv.DictReader(io.StringIO(out)))
        assert [int(r["m"]) for r in rows] == list(range(1, 8))
        for r in rows:
            e2, lo, up = float(r["e2"]), float(r["lower"]), float(r["upper"])
            assert lo - 1e-9 <= e2 <= up + 1e-9
            assert float(r["ratio"]) >= 1 - 1e-9
        for a, c in zip(rows, rows[1:]):
            assert float(c["upper"]) == float(a["upper"]) / 2

    def test_seventeen_digits(self):
        _, out = run("table", "--m", "3:4")
        row = out.splitlines()[1].split(",")
        assert float(row[2]) == float(f"{float(row[2]):.17g}")

    def test_deterministic(self, tmp_path):
        a, c = tmp_path / "a.csv", tmp_path / "c.csv"
        run("table", "--m", "2:9", "--out", str(a))
        run("table", "--m", "2:9", "--out", str(c), "--workers", "2")
        assert a.read_bytes() == c.read_bytes()


class TestVerify:
    def test_default_passes(self):
        code, out = run("verify")
        assert code == EXIT_OK
        assert out.count("PASS") == 5

    def test_fault_names_suite(self):
        code, out = run("verify", "--fault", "mu")
        assert code == EXIT_FAILED
        assert "FAIL mu/omega consistency" in out

    def test_large_naive_refused(self):
        code, _ = run("verify", "--m", "9")
        assert code == EXIT_INVALID

    def test_without_naive(self):
        code, out = run("verify", "--m", "9", "--no-naive")
        assert code == EXIT_OK and "SKIP naive-vs-group" in out

    def test_base_three(self):
        assert run("verify", "--b", "3", "--m", "3", "--alpha1", "3.5")[0] == EXIT_OK


class TestClassify:
    def test_strong(self):
        code, out = run("classify", "--gamma1", "power:1,2", "--gamma2", "power:1,2")
        assert code == EXIT_OK and out.startswith("verdict: strong\n")

    def test_constant(self):
        _, out = run("classify", "--gamma1", "const:1", "--gamma2", "const:1")
        assert "verdict: intractable (weak fails)" in out

    def test_mixed(self):
        _, out = run("classify", "--gamma1", "power:1,2", "--gamma2", "power:1,0")
        assert "weak=false" in out

    def test_explicit_refused(self):
        assert run("classify", "--gamma1", "explicit:1,0.5")[0] == EXIT_INVALID


def test_load_config_types():
    cfg = load_config("b=3\nalpha1=2.5\nexclude-zero-poly=yes\nm=1:4\n")
    assert cfg == {"base": 3, "alpha1": 2.5, "exclude_zero_poly": True, "m": "1:4"}


def test_usage_errors_exit_one():
    assert subprocess.run([sys.executable, "-m", "hybridqmc", "frobnicate"],
                          capture_output=True).returncode == EXIT_INVALID


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "hybridqmc", "classify"], capture_output=True,
                         text=True)
    assert res.returncode == 0 and "verdict: strong" in res.stdout
