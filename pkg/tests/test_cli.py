import io
import json
import math
import subprocess
import sys

import pytest

from alab import cli, cyclo, homoclinic, mahler


@pytest.fixture(autouse=True)
def restore_globals(monkeypatch):
    for mod, name in [(cyclo, "ZERO_REL"), (cyclo, "MAX_ORDER"), (mahler, "SKIP_REL"),
                      (homoclinic, "WORKERS")]:
        monkeypatch.setattr(mod, name, getattr(mod, name))


def run(*argv):
    buf = io.StringIO()
    code = cli.dispatch(list(argv), buf)
    return code, buf.getvalue()


def result(*argv):
    code, out = run(*argv)
    assert code == 0, out
    doc = json.loads(out)
    assert doc["schema"] == 1 and doc["command"] == argv[0]
    return doc["result"]


class TestCommands:
    def test_mahler_quadrature(self):
        r = result("mahler", "--poly", "1+u1+u2+u3", "--dims", "3", "--mode", "quadrature", "--n", "128")
        assert abs(r["value"] - 0.426278) < 2e-3 and r["method"] == "quadrature"

    def test_mahler_modes(self):
        r = result("mahler", "--poly", "u1-2", "--dims", "1", "--mode", "resultant", "--n", "10")
        assert r["value"] == pytest.approx(math.log(1023) / 10)
        r = result("mahler", "--poly", "2-u1-u2", "--dims", "2", "--mode", "riemann", "--gamma", "diag:4,4")
        assert r["excluded_zeros"] == 1

    def test_classify(self):
        assert result("classify", "--poly", "2-u1-u2", "--dims", "2")["verdict"] == "atoral"

    def test_torsion_scan(self):
        r = result("torsion-scan", "--poly", "3-u1-u1^-1-u2-u2^-1", "--dims", "2", "--max-order", "12")
        assert r["count"] == 4
        assert ["1/6", "0"] in [p["angles"] for p in r["points"]]

    def test_homoclinic(self):
        r = result("homoclinic", "--poly", "u1^2-u1-1", "--dims", "1", "--window", "4", "--grid", "64")
        assert r is not None
        r = result("homoclinic", "--poly", "2-u1-u2", "--dims", "2", "--window", "4", "--grid", "256",
                   "--extrapolate")
        c00 = [c for c in r["coefficients"] if c["n"] == [0, 0]][0]
        assert r["extrapolated"] and abs(c00["value"]["re"] - 0.5) < 1e-2
        code, out = run("homoclinic", "--poly", "2-u1-u2", "--dims", "2", "--search", "--csv")
        assert code == 0 and out.splitlines()[0].startswith("n1,n2")

    def test_growth_and_gelfond(self):
        r = result("growth", "--poly", "u1-2", "--dims", "1", "--gammas", "diag-range:5:20:5")
        assert r is not None
        r = result("gelfond", "--poly", "u1^4-u1^3-u1^2-u1+1", "--dims", "1", "--n-max", "50",
                   "--eps", "0.05")
        assert r is not None

    def test_dioph_ratio(self):
        r = result("dioph-ratio", "--poly", "1+u1+u2+u3", "--dims", "3",
                   "--gammas", "diag-range:5:9:2", "--radii", "0.8,0.5714,0.4444")
        assert r is not None

    def test_csv_and_table(self):
        code, out = run("mahler", "--poly", "u1-2", "--dims", "1", "--csv")
        assert code == 0 and out.splitlines()[0] == "method,resolution,value,excluded_zeros,skipped_nodes"
        code, out = run("classify", "--poly", "2-u1-u2", "--dims", "2", "--format", "table")
        assert code == 0 and out.split()[:3] == ["verdict", "reason", "dim_estimate"]

    def test_out_file(self, tmp_path):
        p = tmp_path / "m.json"
        code, out = run("mahler", "--poly", "u1-2", "--dims", "1", "--out", str(p))
        assert code == 0 and out == "" and json.loads(p.read_text())["result"]["value"] > 0.69


class TestErrors:
    def test_infinite_entropy(self):
        code, out = run("mahler", "--poly", "0", "--dims", "1")
        err = json.loads(out)["error"]
        assert code == 1 and "infinite entropy" in err["message"]

    def test_syntax(self):
        code, out = run("mahler", "--poly", "2 - u1 **", "--dims", "1")
        err = json.loads(out)["error"]
        assert code == 2 and err["type"] == "syntax" and isinstance(err["position"], int)

    def test_usage(self):
        assert run("mahler", "--poly", "u1", "--dims", "1", "--mode", "riemann")[0] == 2
        assert run("mahler", "--poly", "u1", "--dims", "1", "--n", "9000")[0] == 2
        assert run("torsion-scan", "--poly", "u1-1", "--dims", "1", "--max-order", "50",
                   "--max-order-cap", "10")[0] == 2
        assert run("mahler", "--poly", "u1", "--dims", "1", "--zero-tol", "0.5")[0] == 2

    def test_argparse(self):
        assert run("nosuch")[0] == 2
        assert run("mahler")[0] == 2

    def test_no_unitary_roots(self):
        code, out = run("gelfond", "--poly", "u1^2-u1-1", "--dims", "1", "--n-max", "5", "--eps", "0.1")
        assert code == 1 and "unit circle" in json.loads(out)["error"]["message"]


def test_deterministic_bytes():
    argv = [sys.executable, "-m", "alab.cli", "mahler", "--poly", "2-u1-u2+3u1^2u2^-1",
            "--dims", "2", "--n", "256"]
    a = subprocess.run(argv, capture_output=True, check=True).stdout
    b = subprocess.run(argv, capture_output=True, check=True).stdout
    assert a == b and b"value" in a
