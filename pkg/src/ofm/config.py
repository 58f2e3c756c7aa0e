"""Feasibility ceilings, overridable from the environment."""

import os

DEFAULT_MAX_PHI2 = 20000
DEFAULT_MAX_PHI3 = 20000
DEFAULT_MAX_CANDIDATES = 1_000_000
# full subfamily enumeration for directed families up to this many filters
DIRECTED_FAMILY_LIMIT = 12
MAX_POSET_SIZE = 5
MAX_SPACE_SIZE = 4
MAX_MONAD_SPACE_SIZE = 3


def _env_int(name: str, default: int) -> int:
    raw = os.environ.get(name)
    if raw is None or raw == "":
        return default
    try:
        value = int(raw)
    except ValueError:
        raise ValueError(f"{name} must be an integer, got {raw!r}") from None
    if value <= 0:
        raise ValueError(f"{name} must be positive, got {value}")
    return value


def max_phi2() -> int:
    return _env_int("OFM_MAX_PHI2", DEFAULT_MAX_PHI2)


def max_phi3() -> int:
    return _env_int("OFM_MAX_PHI3", DEFAULT_MAX_PHI3)


def max_candidates() -> int:
    return _env_int("OFM_MAX_CANDIDATES", DEFAULT_MAX_CANDIDATES)
