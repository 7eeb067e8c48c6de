"""
Utility functions for greenspline.
Includes logging setup, environment configuration and the error types
shared by the library and the command-line front end.
"""

import logging
import os
from datetime import datetime
from pathlib import Path
from typing import Any, Dict, Optional

import numpy as np
from dotenv import load_dotenv

# Load environment variables
load_dotenv()


# ============================================================================
# Logging Setup
# ============================================================================

def setup_logging() -> logging.Logger:
    """
    Configure the package logger.

    Console output goes to stderr so that stdout stays reserved for data.
    When GREENSPLINE_LOG_DIR is set, a dated log file is written there too.
    """
    log_level = os.getenv("GREENSPLINE_LOG_LEVEL", "INFO").upper()

    logger = logging.getLogger("greenspline")
    logger.setLevel(getattr(logging, log_level, logging.INFO))

    # Avoid duplicate handlers
    if logger.handlers:
        return logger

    console_handler = logging.StreamHandler()
    console_handler.setLevel(getattr(logging, log_level, logging.INFO))
    console_formatter = logging.Formatter(
        '%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        datefmt='%Y-%m-%d %H:%M:%S'
    )
    console_handler.setFormatter(console_formatter)
    logger.addHandler(console_handler)

    log_dir = os.getenv("GREENSPLINE_LOG_DIR")
    if log_dir:
        log_path = Path(log_dir)
        log_path.mkdir(parents=True, exist_ok=True)
        log_file = log_path / f"greenspline_{datetime.now().strftime('%Y%m%d')}.log"
        file_handler = logging.FileHandler(log_file)
        file_handler.setLevel(getattr(logging, log_level, logging.INFO))
        file_formatter = logging.Formatter(
            '%(asctime)s - %(name)s - %(levelname)s - %(funcName)s:%(lineno)d - %(message)s'
        )
        file_handler.setFormatter(file_formatter)
        logger.addHandler(file_handler)

    return logger


logger = setup_logging()


# ============================================================================
# Configuration Helpers
# ============================================================================

def get_config() -> Dict[str, Any]:
    """
    Load configuration from environment variables.
    """
    seed = os.getenv("GREENSPLINE_SEED")
    return {
        "seed": int(seed) if seed not in (None, "") else None,
        "log_level": os.getenv("GREENSPLINE_LOG_LEVEL", "INFO").upper(),
        "truncation": int(os.getenv("GREENSPLINE_TRUNCATION", "10000")),
        "panels": int(os.getenv("GREENSPLINE_PANELS", "2048")),
        "mc_count": int(os.getenv("GREENSPLINE_MC_COUNT", "100000")),
    }


# ============================================================================
# Error Types
# ============================================================================

class GreenSplineError(Exception):
    """Base class for all library errors. `exit_code` is the CLI status."""
    exit_code = 1


class InvalidInputError(GreenSplineError, ValueError):
    """Input violates a documented precondition."""
    exit_code = 1


class DomainError(InvalidInputError):
    """A time argument lies outside [0, 1]."""
    exit_code = 1


class NumericalFailure(GreenSplineError):
    """Factorization failed beyond the jitter policy, or a degenerate conditioning variable."""
    exit_code = 2


class VerificationFailure(GreenSplineError):
    """At least one verification check exceeded its tolerance."""
    exit_code = 3


# ============================================================================
# Error Response Helper
# ============================================================================

def error_payload(exc: BaseException, code: Optional[int] = None) -> Dict[str, Any]:
    """
    Create a JSON-ready error document for the command line.
    """
    if code is None:
        code = getattr(exc, "exit_code", 1)
    return {
        "error": {
            "message": str(exc),
            "type": type(exc).__name__,
            "code": code,
        }
    }


# ============================================================================
# Domain Checks
# ============================================================================

def check_unit_interval(values: Any, name: str = "t") -> None:
    """Raise DomainError unless every value lies in [0, 1]."""
    arr = np.asarray(values, dtype=float)
    if arr.size == 0:
        return
    if not np.all(np.isfinite(arr)):
        raise DomainError(f"{name} must be finite")
    if arr.min() < 0.0 or arr.max() > 1.0:
        raise DomainError(f"{name} must lie in [0, 1], got range [{arr.min()}, {arr.max()}]")
