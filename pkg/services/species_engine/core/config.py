"""
Species Engine Configuration

Centralizes truncation defaults, the splitting randomness and the
nondegeneracy search knobs. CLI flags take precedence over these values.
"""

from functools import lru_cache

from pydantic import Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

from common.config import CommonSettings


class SearchSettings(BaseSettings):
    """
    Defaults for the randomized nondegeneracy search.

    SEARCH_POOL is an inclusive integer range written "lo..hi".
    """

    SEARCH_TRIALS: int = Field(1000, ge=1)
    SEARCH_SEED: int = 42
    SEARCH_POOL: str = "-2..2"
    SEARCH_WORKERS: int = Field(1, ge=1)

    model_config = SettingsConfigDict(env_file=".env", extra="ignore")

    @field_validator("SEARCH_POOL")
    @classmethod
    def check_pool(cls, v: str) -> str:
        parse_pool(v)
        return v

    def pool(self) -> list[int]:
        """Coefficient pool as a sorted list of integers."""
        return parse_pool(self.SEARCH_POOL)


class SplitSettings(BaseSettings):
    """Randomness used when greedy extraction needs generic elements."""

    SPLIT_SEED: int = 0
    SPLIT_RANDOM_ATTEMPTS: int = Field(64, ge=1)
    SPLIT_COEFF_BOUND: int = Field(5, ge=1)

    model_config = SettingsConfigDict(env_file=".env", extra="ignore")


class EngineSettings(CommonSettings):
    """
    Species engine settings.

    Inherits common settings and adds engine-specific configuration.
    """

    # Service identification
    PROJECT_NAME: str = "Species Potentials Engine"

    # Truncation
    DEFAULT_DEGREE: int = Field(8, ge=0)

    # Report output
    JSON_INDENT: int = 2

    # Nested groups
    search: SearchSettings = Field(default_factory=SearchSettings)
    split: SplitSettings = Field(default_factory=SplitSettings)


def parse_pool(text: str) -> list[int]:
    """Parse "lo..hi" (or a comma list) into the list of pool integers."""
    text = text.strip()
    try:
        if ".." in text:
            lo, hi = (int(part) for part in text.split("..", 1))
            values = list(range(lo, hi + 1))
        else:
            values = sorted({int(part) for part in text.split(",") if part.strip()})
    except ValueError as e:
        raise ValueError(f"invalid coefficient pool '{text}'") from e
    if not values:
        raise ValueError(f"empty coefficient pool '{text}'")
    return values


@lru_cache
def get_settings() -> EngineSettings:
    """Get cached settings instance."""
    return EngineSettings()


# Global settings instance
settings = get_settings()
