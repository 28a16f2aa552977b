"""
Runtime configuration.

Settings come from keyword arguments, then VLINES_* environment variables, then the
defaults below. Nothing in the library reads the environment except get_settings().
"""

from enum import Enum
from functools import lru_cache
from typing import Tuple

from pydantic import BaseSettings, conint, validator


class ConnectivityConvention(str, Enum):
    """
    How conn(W) is read off the homology of W.

    BOTTOM_DEGREE:   conn(W) = min{n : H_n(W) != 0}, so conn(S^0) = 0 and condition (4)
                     with W = S^0 reduces to condition (2).
    VANISHING_RANGE: conn(W) = largest n with H_i(W) = 0 for i <= n, one less.
    """

    BOTTOM_DEGREE = "bottom-degree"
    VANISHING_RANGE = "vanishing-range"


CONNECTIVITY_OFFSETS = {
    ConnectivityConvention.BOTTOM_DEGREE: 0,
    ConnectivityConvention.VANISHING_RANGE: -1,
}

DEFAULT_CONNECTIVITY_CONVENTION = ConnectivityConvention.BOTTOM_DEGREE


class Settings(BaseSettings):

    # Random tower corpora (see towers.GeneratorParams for the bounds).
    prime: int = 2
    max_levels: conint(ge=1, le=6) = 4  # type: ignore
    max_generators: conint(ge=1, le=40) = 12  # type: ignore
    degree_window: Tuple[int, int] = (-2, 4)

    # Default W-families for conditions (3) and (4).
    family_random_count: conint(ge=0, le=8) = 2  # type: ignore
    family_seed: int = 0
    family_window_padding: conint(ge=0, le=4) = 1  # type: ignore

    connectivity_convention: ConnectivityConvention = DEFAULT_CONNECTIVITY_CONVENTION

    log_level: str = "WARNING"

    # Worker processes for corpus runs; results are always merged in seed order.
    jobs: conint(ge=1) = 1  # type: ignore

    class Config:
        env_prefix = "VLINES_"

    @validator("degree_window")
    @classmethod
    def validate_degree_window(cls, window: Tuple[int, int]) -> Tuple[int, int]:
        lo, hi = window
        if lo > hi:
            raise ValueError(f"degree window ({lo}, {hi}) is empty")
        return window

    @validator("log_level")
    @classmethod
    def validate_log_level(cls, level: str) -> str:
        level = level.upper()
        if level not in ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"):
            raise ValueError(f"unknown log level {level!r}")
        return level


@lru_cache(maxsize=None)
def get_settings() -> Settings:
    return Settings()
