#!/usr/bin/env python3
"""
Logging Configuration
Single place where entry points set up log handlers and verbosity.
"""

import logging
import os
import sys

from dotenv import load_dotenv

LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
LOG_ENV_VAR = "SPARSEDECOMP_LOG"


def resolve_level(default: str = "WARNING") -> int:
    """Read the verbosity from SPARSEDECOMP_LOG (a .env file is honoured)."""
    load_dotenv()
    name = os.getenv(LOG_ENV_VAR, default).strip().upper()
    level = logging.getLevelName(name)
    if not isinstance(level, int):
        logging.getLogger(__name__).warning(f"Unknown log level {name!r}, using {default}")
        level = logging.getLevelName(default)
    return int(level)


def configure_logging(default: str = "WARNING", log_file: str | None = None) -> None:
    """Configure the root logger; logs go to stderr so stdout stays machine-readable."""
    handlers: list[logging.Handler] = [logging.StreamHandler(sys.stderr)]
    if log_file:
        handlers.append(logging.FileHandler(log_file))
    logging.basicConfig(level=resolve_level(default), format=LOG_FORMAT, handlers=handlers, force=True)
