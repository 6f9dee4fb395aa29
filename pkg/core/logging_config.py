"""Structured logging configuration."""
import logging
import sys
from fractions import Fraction
from typing import Any, Dict

import mpmath
import structlog

from core.config import settings


def _plain_number(value: Any) -> Any:
    if isinstance(value, Fraction):
        return str(value) if value.denominator != 1 else value.numerator
    if isinstance(value, (mpmath.mpf, mpmath.mpc)):
        return mpmath.nstr(value, 15)
    if isinstance(value, (list, tuple)):
        return [_plain_number(v) for v in value]
    return value


def render_numbers(logger, method_name: str, event_dict: Dict[str, Any]) -> Dict[str, Any]:
    """Render exact rationals and multiprecision values as JSON-safe scalars."""
    return {key: _plain_number(value) for key, value in event_dict.items()}


def configure_logging():
    """Configure structured logging with structlog."""
    structlog.configure(
        processors=[
            structlog.stdlib.filter_by_level,
            structlog.stdlib.add_logger_name,
            structlog.stdlib.add_log_level,
            structlog.processors.TimeStamper(fmt="iso"),
            render_numbers,
            structlog.processors.format_exc_info,
            structlog.processors.JSONRenderer(),
        ],
        context_class=dict,
        logger_factory=structlog.stdlib.LoggerFactory(),
        wrapper_class=structlog.stdlib.BoundLogger,
        cache_logger_on_first_use=True,
    )

    # stdout carries CLI reports
    logging.basicConfig(
        format="%(message)s",
        stream=sys.stderr,
        level=getattr(logging, settings.LOG_LEVEL.upper()),
    )

    return structlog.get_logger("lattice")


logger = configure_logging()
