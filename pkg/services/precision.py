"""Precision escalation for numerically certified computations."""
from typing import Callable, Optional, TypeVar

from tenacity import (
    RetryCallState,
    Retrying,
    retry_if_exception_type,
    stop_after_attempt,
)

from core.config import settings
from core.exceptions import PrecisionError
from core.logging_config import logger


T = TypeVar("T")


def precision_schedule(start_bits: int, max_bits: int) -> int:
    """Number of doublings from start_bits that stay within max_bits."""
    if start_bits < 64:
        raise ValueError("working precision must be at least 64 bits")
    attempts = 1
    bits = start_bits
    while bits * 2 <= max_bits:
        bits *= 2
        attempts += 1
    return attempts


def _log_escalation(retry_state: RetryCallState) -> None:
    error = retry_state.outcome.exception() if retry_state.outcome else None
    logger.warning(
        "Certification failed, doubling precision",
        attempt=retry_state.attempt_number,
        error=str(error),
    )


def escalate_precision(
    operation: Callable[[int], T],
    start_bits: Optional[int] = None,
    max_bits: Optional[int] = None,
) -> T:
    """
    Run operation(bits), doubling bits on PrecisionError.

    Args:
        operation: Callable taking the working precision in bits
        start_bits: First precision (defaults to CL_PRECISION)
        max_bits: Ceiling (defaults to CL_MAX_PRECISION)

    Returns:
        The first successful result

    Raises:
        PrecisionError: If the ceiling is reached without certification
    """
    start = start_bits or settings.CL_PRECISION
    ceiling = max(max_bits or settings.CL_MAX_PRECISION, start)

    for attempt in Retrying(
        stop=stop_after_attempt(precision_schedule(start, ceiling)),
        retry=retry_if_exception_type(PrecisionError),
        before_sleep=_log_escalation,
        reraise=True,
    ):
        with attempt:
            bits = start << (attempt.retry_state.attempt_number - 1)
            result = operation(bits)
    return result
