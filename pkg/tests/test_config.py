import pytest

from alab.config import RunConfig


def test_defaults():
    c = RunConfig()
    assert c.zero_tol == 1e-6 and c.threads == 1 and c.format == "json"


@pytest.mark.parametrize("kw", [{"zero_tol": 0.0}, {"zero_tol": 1e-3}, {"threads": 0},
                                {"format": "xml"}, {"quad_tol": 1.0}, {"max_grid": 0}])
def test_validation(kw):
    with pytest.raises(ValueError):
        RunConfig(**kw)


def test_from_file(tmp_path):
    p = tmp_path / "run.cfg"
    p.write_text("# tolerances\nzero-tol = 1e-7\nthreads = 4  # cores\nformat = 'csv'\n\n")
    c = RunConfig.from_file(p)
    assert c.zero_tol == 1e-7 and c.threads == 4 and c.format == "csv"


@pytest.mark.parametrize("text", ["bogus = 1\n", "threads\n", "threads = many\n"])
def test_from_file_errors(tmp_path, text):
    p = tmp_path / "bad.cfg"
    p.write_text(text)
    with pytest.raises(ValueError):
        RunConfig.from_file(p)


def test_env_caps_threads(monkeypatch):
    monkeypatch.setenv("ALAB_THREADS", "2")
    assert RunConfig(threads=8).with_env().threads == 2
    assert RunConfig(threads=1).with_env().threads == 1
    monkeypatch.setenv("ALAB_THREADS", "0")
    with pytest.raises(ValueError):
        RunConfig().with_env()
    monkeypatch.delenv("ALAB_THREADS")
    assert RunConfig(threads=3).with_env().threads == 3
