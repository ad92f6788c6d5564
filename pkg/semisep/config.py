# -----------------------------
# file: config.py
# -----------------------------
import os
from dotenv import load_dotenv
from typing import Tuple

# Load environment variables from .env (if present)
load_dotenv()


def _flag(name: str, default: str = "False") -> bool:
    return os.getenv(name, default).lower() in ("1", "true", "yes")


class Config:
    """Engine configuration read from the environment.

    - SEMISEP_MAX_BLOWUPS: guard on the number of point blow-ups performed
      while putting walls into normal crossings.
    - SEMISEP_DEGREE_SWEEP: highest degree tried by the sampling oracle.
    - SEMISEP_VAR_ORDER: projection order of the cell decomposition, "xy"
      projects onto the first scene variable, "yx" onto the second.
    - SEMISEP_SAMPLE_BUDGET / SEMISEP_SAMPLE_SEED: oracle sampling.
    - SEMISEP_LOG_TO_FILE / SEMISEP_LOG_FILE / SEMISEP_QUIET: logging sinks.

    Scene options override these values per scene and CLI flags override
    scene options.
    """

    # Resolution
    MAX_BLOWUPS: int = int(os.getenv("SEMISEP_MAX_BLOWUPS", "30"))

    # Cell decomposition
    VAR_ORDER: str = os.getenv("SEMISEP_VAR_ORDER", "xy")
    REFINE_ROUNDS: int = int(os.getenv("SEMISEP_REFINE_ROUNDS", "6"))

    # Oracle
    DEGREE_SWEEP: int = int(os.getenv("SEMISEP_DEGREE_SWEEP", "8"))
    SAMPLE_BUDGET: int = int(os.getenv("SEMISEP_SAMPLE_BUDGET", "40"))
    SAMPLE_SEED: int = int(os.getenv("SEMISEP_SAMPLE_SEED", "7"))
    SAMPLE_SPAN: int = int(os.getenv("SEMISEP_SAMPLE_SPAN", "4"))

    # Logging
    LOG_TO_FILE: bool = _flag("SEMISEP_LOG_TO_FILE")
    LOG_FILE: str = os.getenv("SEMISEP_LOG_FILE", "semisep.log")
    QUIET: bool = _flag("SEMISEP_QUIET")

    VAR_ORDERS: Tuple[str, ...] = ("xy", "yx")

    @classmethod
    def validate(cls) -> None:
        """Validate configuration and raise on misconfiguration."""
        if cls.VAR_ORDER not in cls.VAR_ORDERS:
            raise ValueError(
                f"SEMISEP_VAR_ORDER must be one of {cls.VAR_ORDERS}, got {cls.VAR_ORDER!r}"
            )
        for name in ("MAX_BLOWUPS", "DEGREE_SWEEP", "SAMPLE_BUDGET", "SAMPLE_SPAN", "REFINE_ROUNDS"):
            if getattr(cls, name) < 1:
                raise ValueError(f"{name} must be at least 1, got {getattr(cls, name)}")

    @classmethod
    def swapped_order(cls, var_order: str = None) -> bool:
        """True when the decomposition projects onto the second variable."""
        order = var_order or cls.VAR_ORDER
        if order not in cls.VAR_ORDERS:
            raise ValueError(f"unknown variable order {order!r}")
        return order == "yx"
