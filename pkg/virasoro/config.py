from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    model_config = SettingsConfigDict(
        env_prefix="VIRASORO_",
        env_file=".env",
        env_file_encoding="utf-8",
        extra="ignore",
    )

    # Singular-vector scan
    level_cap: int = 12
    assume_simple_beyond_cap: bool = False

    # Tensor product truncation window
    window_level: int = 8
    window_min: int = -12
    window_max: int = 12
    closure_extra_levels: int = 3

    # Application
    log_level: str = "WARNING"
    debug: bool = False


# Create a single instance to avoid re-reading .env on every call
_settings = None

def get_settings() -> Settings:
    global _settings
    if _settings is None:
        _settings = Settings()
    return _settings


def reset_settings() -> None:
    """Drop the cached settings so the next call re-reads the environment."""
    global _settings
    _settings = None
