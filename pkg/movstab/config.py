"""
config.py - Configuration, verdict labels and exit codes for movstab.

Defaults live in DEFAULT_CONFIG and can be overridden from the environment
(optionally through a .env file loaded with python-dotenv).
"""

import logging
import os
from typing import Any, Dict

from dotenv import load_dotenv

logger = logging.getLogger(__name__)

# ============================================================================
# DEFAULTS
# ============================================================================

DEFAULT_CONFIG: Dict[str, Any] = {
    "format": "json",
    "log_level": "WARNING",
    "workers": 1,
    "seed": None,
    "schema_version": 1,
}

OUTPUT_FORMATS = ("json", "text")

# ============================================================================
# EXIT CODES
# ============================================================================

EXIT_OK = 0
EXIT_SCHEMA = 2
EXIT_PRECONDITION = 3
EXIT_INVARIANT = 4

# ============================================================================
# VERDICT LABELS
# ============================================================================

VERDICT_CONSISTENT = "consistent"
VERDICT_FAMILY_INCOMPLETE = "FAMILY-INCOMPLETE-OR-NONGEOMETRIC"
VERDICT_FLAT = "flat-certified"
VERDICT_INCONSISTENT_FAMILY = "inconsistent family data"
VERDICT_PROJ_FLAT = "projectively-flat-certified"
VERDICT_EQUALITY_FAILS = "equality fails"
VERDICT_FLAT_FORCED = "flat (c1 = 0 forced)"
VERDICT_E_NEF = "E nef"
VERDICT_DUAL_NEF = "E^* nef"
VERDICT_NEF = "nef"
VERDICT_NEF_COUNTEREXAMPLE = "counterexample-to-input-consistency"
VERDICT_GATE_PASSED = "gate-passed"
VERDICT_HYPOTHESES_MET = "hypotheses-met"

EFFECTIVITY_AMPLE_ORTHOGONAL = "ample-orthogonal"
EFFECTIVITY_POSITIVE = "pseudo-effective(+)"
EFFECTIVITY_NEGATIVE = "pseudo-effective(-)"

POINT_STABLE = "stable"
POINT_STRICTLY_SEMISTABLE = "strictly-semistable"
POINT_UNSTABLE = "unstable"


def _parse_workers(raw: str) -> int:
    try:
        workers = int(raw)
    except ValueError:
        logger.warning("Ignoring non-integer MOVSTAB_WORKERS=%r", raw)
        return DEFAULT_CONFIG["workers"]
    return max(1, workers)


def get_config() -> Dict[str, Any]:
    """
    Build the effective configuration.

    Environment variables (a .env file is honoured):
        MOVSTAB_FORMAT: json or text
        MOVSTAB_LOG_LEVEL: logging level name
        MOVSTAB_WORKERS: thread count for member-parallel and multi-bundle work
        MOVSTAB_SEED: accepted for compatibility; the tool uses no randomness

    Returns:
        A fresh configuration dictionary
    """
    load_dotenv()
    config = DEFAULT_CONFIG.copy()

    output_format = os.getenv("MOVSTAB_FORMAT", config["format"]).strip().lower()
    if output_format not in OUTPUT_FORMATS:
        logger.warning("Unknown MOVSTAB_FORMAT=%r, using %s", output_format, config["format"])
        output_format = config["format"]
    config["format"] = output_format

    config["log_level"] = os.getenv("MOVSTAB_LOG_LEVEL", config["log_level"]).strip().upper()
    config["workers"] = _parse_workers(os.getenv("MOVSTAB_WORKERS", str(config["workers"])))

    seed = os.getenv("MOVSTAB_SEED")
    if seed is not None:
        logger.debug("MOVSTAB_SEED=%s ignored: all computations are deterministic", seed)
    config["seed"] = seed
    return config


def get_exit_code(error: BaseException) -> int:
    """Map an exception to the process exit code of the runner."""
    return getattr(error, "exit_code", EXIT_INVARIANT)
