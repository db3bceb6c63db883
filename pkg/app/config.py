from functools import lru_cache

from pydantic import field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Application settings."""

    # Application
    APP_ENV: str = "development"
    LOG_LEVEL: str = "INFO"
    API_PREFIX: str = "/api/v1"

    # Exploration budgets (canonical states)
    SPT_BOUND: int = 100_000
    CLOSURE_BUDGET: int = 10_000

    # Identifier unfolding
    UNFOLD_BOUND: int = 2
    UNFOLD_LIMIT: int = 64

    # Congruence switches
    HALTING_ABSORPTION: bool = False

    @field_validator("SPT_BOUND", "CLOSURE_BUDGET", "UNFOLD_LIMIT")
    @classmethod
    def validate_positive(cls, v: int) -> int:
        """Budgets must allow at least one state."""
        if v <= 0:
            raise ValueError("budget values must be positive")
        return v

    @field_validator("UNFOLD_BOUND")
    @classmethod
    def validate_unfold_bound(cls, v: int) -> int:
        if v < 0:
            raise ValueError("UNFOLD_BOUND must not be negative")
        return v

    model_config = SettingsConfigDict(env_file=".env", case_sensitive=True, extra="ignore")


@lru_cache()
def get_settings() -> Settings:
    """
    Get application settings.

    Returns:
        Settings: Application settings
    """
    return Settings()
