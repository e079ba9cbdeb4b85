"""Configuration management for the noise-control workbench."""

from pathlib import Path
from typing import Optional

from dotenv import load_dotenv
from pydantic import Field
from pydantic_settings import BaseSettings

# Load environment variables from an optional .env file at the project root
env_path = Path(__file__).parent.parent / ".env"
load_dotenv(dotenv_path=env_path)


class NumericsConfig(BaseSettings):
    """Numerical sizing limits."""

    rtn_state_cap: int = Field(default=12, alias="RTN_STATE_CAP")
    """Largest K accepted by build_rtn_ensemble (M = 2^K states)."""
    propagator_cache_size: int = Field(default=256, alias="PROPAGATOR_CACHE_SIZE")

    class Config:
        env_file = ".env"
        case_sensitive = False
        extra = "ignore"


class OptimizerDefaults(BaseSettings):
    """Defaults for gradient-ascent pulse optimization."""

    n_starts: int = Field(default=8, alias="OPTIMIZER_N_STARTS")
    max_iterations: int = Field(default=2000, alias="OPTIMIZER_MAX_ITERATIONS")
    gradient_tolerance: float = Field(default=1e-7, alias="OPTIMIZER_GRADIENT_TOLERANCE")
    initial_step: float = Field(default=1.0, alias="OPTIMIZER_INITIAL_STEP")
    segments_per_pi: int = Field(default=4, alias="OPTIMIZER_SEGMENTS_PER_PI")

    class Config:
        env_file = ".env"
        case_sensitive = False
        extra = "ignore"


class MLflowConfig(BaseSettings):
    """MLflow tracking configuration."""

    tracking_uri: Optional[str] = Field(
        default="sqlite:///mlflow.db", alias="MLFLOW_TRACKING_URI"
    )
    experiment_name: str = Field(default="noise-control", alias="MLFLOW_EXPERIMENT_NAME")
    run_name: Optional[str] = Field(default=None, alias="MLFLOW_RUN_NAME")
    # Off by default so batch runs have no side effects beyond their outputs
    enabled: bool = Field(default=False, alias="MLFLOW_ENABLED")

    class Config:
        env_file = ".env"
        case_sensitive = False
        extra = "ignore"


class AppConfig(BaseSettings):
    """Main application configuration."""

    log_level: str = Field(default="INFO", alias="LOG_LEVEL")

    results_dir: Path = Field(default=Path("results"), alias="RESULTS_DIR")
    cache_dir: Path = Field(default=Path("results/.cache"), alias="CACHE_DIR")
    enable_result_cache: bool = Field(default=True, alias="ENABLE_RESULT_CACHE")
    default_threads: int = Field(default=4, alias="DEFAULT_THREADS")

    numerics: NumericsConfig = Field(default_factory=NumericsConfig)
    optimizer: OptimizerDefaults = Field(default_factory=OptimizerDefaults)
    mlflow: MLflowConfig = Field(default_factory=MLflowConfig)

    class Config:
        env_file = ".env"
        case_sensitive = False
        extra = "ignore"


# Global configuration instance
config = AppConfig()


def get_config() -> AppConfig:
    """Get the global configuration instance."""
    return config


def reload_config() -> AppConfig:
    """Reload configuration from environment variables."""
    global config
    config = AppConfig()
    return config
