import pytest

from svdyn import config
from svdyn.errors import UsageError


def test_defaults(monkeypatch):
    for name in ("SVDYN_CELL_CAP", "SVDYN_MAX_DEPTH", "SVDYN_CYCLE_BUDGET"):
        monkeypatch.delenv(name, raising=False)
    assert config.cell_cap() == config.DEFAULT_CELL_CAP
    assert config.max_depth() == config.DEFAULT_MAX_DEPTH
    assert config.cycle_budget() == config.DEFAULT_CYCLE_BUDGET


def test_environment_override(monkeypatch):
    monkeypatch.setenv("SVDYN_CELL_CAP", " 500 ")
    assert config.cell_cap() == 500


def test_blank_means_default(monkeypatch):
    monkeypatch.setenv("SVDYN_MAX_DEPTH", "")
    assert config.max_depth() == config.DEFAULT_MAX_DEPTH


@pytest.mark.parametrize("raw", ["many", "0", "-3"])
def test_rejects_bad_values(monkeypatch, raw):
    monkeypatch.setenv("SVDYN_CYCLE_BUDGET", raw)
    with pytest.raises(UsageError):
        config.cycle_budget()
