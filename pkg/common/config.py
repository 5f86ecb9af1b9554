# common/config.py
from functools import lru_cache

from pydantic import field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict


class CommonSettings(BaseSettings):
    # --- App Metadatos ---
    ENVIRONMENT: str = "development"
    PROJECT_NAME: str = "Species Potentials"
    VERSION: str = "0.1.0"
    DESCRIPTION: str = "Exact algebras with potentials over species"

    # --- Logging ---
    LOG_LEVEL: str = "INFO"
    LOG_FORMAT: str = "%(asctime)s %(levelname)s %(name)s: %(message)s"

    model_config = SettingsConfigDict(
        env_file=".env", env_file_encoding="utf-8", extra="ignore", case_sensitive=True
    )

    @field_validator("LOG_LEVEL", mode="before")
    @classmethod
    def normalize_log_level(cls, v: str) -> str:
        if isinstance(v, str) and v.strip():
            return v.strip().upper()
        raise ValueError(v)


@lru_cache
def get_settings() -> CommonSettings:
    return CommonSettings()


settings = get_settings()
