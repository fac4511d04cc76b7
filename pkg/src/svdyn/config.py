import os

from dotenv import load_dotenv

from svdyn.errors import UsageError

load_dotenv()

DATABASE_URL = os.environ.get("DATABASE_URL", "sqlite:///svdyn.db")

DEFAULT_CELL_CAP = 1_000_000
DEFAULT_MAX_DEPTH = 8
DEFAULT_CYCLE_BUDGET = 200_000


def _int_setting(name: str, default: int) -> int:
    raw = os.environ.get(name, "").strip()
    if not raw:
        return default
    try:
        value = int(raw)
    except ValueError:
        raise UsageError(f"{name} must be an integer, got {raw!r}")
    if value < 1:
        raise UsageError(f"{name} must be positive, got {value}")
    return value


def cell_cap() -> int:
    """Maximum number of cells a truncation may hold (SVDYN_CELL_CAP)."""
    return _int_setting("SVDYN_CELL_CAP", DEFAULT_CELL_CAP)


def max_depth() -> int:
    return _int_setting("SVDYN_MAX_DEPTH", DEFAULT_MAX_DEPTH)


def cycle_budget() -> int:
    return _int_setting("SVDYN_CYCLE_BUDGET", DEFAULT_CYCLE_BUDGET)
