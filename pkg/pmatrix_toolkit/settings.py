from __future__ import annotations

import os
from functools import lru_cache

from dotenv import load_dotenv
from pydantic import BaseModel, Field, ValidationError

from .errors import ConfigError


class Settings(BaseModel):
    """Runtime configuration. Every field can be overridden from the environment (or a .env file)."""
    minor_cap: int = Field(20, ge=1, description="Largest n for which all 2^n - 1 principal minors are enumerated.")
    witness_cap: int = Field(16, ge=1, description="Largest n for which the 2^n sign patterns are scanned.")
    lcp_cap: int = Field(14, ge=1, description="Largest n for which the 2^n complementary supports are enumerated.")
    tol: float = Field(1e-9, gt=0, description="Float comparison tolerance, scaled by max(1, magnitude).")
    lcp_tol: float = Field(1e-8, gt=0, description="Tolerance for LCP soundness checks and duplicate merging.")
    seed: int = Field(42, ge=0, description="Default seed for every random path.")
    log_level: str = Field("WARNING", description="Log level the CLI configures on stderr.")


ENV_VARS = {
    "minor_cap": "PMAT_MINOR_CAP",
    "witness_cap": "PMAT_WITNESS_CAP",
    "lcp_cap": "PMAT_LCP_CAP",
    "tol": "PMAT_TOL",
    "lcp_tol": "PMAT_LCP_TOL",
    "seed": "PMAT_SEED",
    "log_level": "PMAT_LOG_LEVEL",
}


def load_settings() -> Settings:
    # safe no-op when there is no .env file
    load_dotenv()
    values = {field: os.environ[env] for field, env in ENV_VARS.items() if os.environ.get(env)}
    try:
        return Settings(**values)
    except ValidationError as e:
        raise ConfigError(f"Invalid environment configuration: {e}") from e


@lru_cache(maxsize=1)
def get_settings() -> Settings:
    return load_settings()
