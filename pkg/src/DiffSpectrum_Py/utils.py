"""Utility functions and decorators shared across the toolkit."""

import logging
import time
from collections.abc import Callable
from functools import wraps
from types import TracebackType
from typing import ParamSpec, TypeVar

from DiffSpectrum_Py.exceptions import DivisibilityViolationError

logger = logging.getLogger(__name__)

P = ParamSpec("P")
T = TypeVar("T")


def timed_operation(
    operation_name: str | None = None,
) -> Callable[[Callable[P, T]], Callable[P, T]]:
    """Decorator to measure and log operation timing.

    Args:
        operation_name: Optional name for the operation. If not provided,
                       uses the function name.

    Returns:
        Decorated function that logs execution time.
    """

    def decorator(func: Callable[P, T]) -> Callable[P, T]:
        @wraps(func)
        def wrapper(*args: P.args, **kwargs: P.kwargs) -> T:
            name = operation_name or func.__name__
            start_time = time.perf_counter()
            try:
                result = func(*args, **kwargs)
                elapsed = (time.perf_counter() - start_time) * 1000
                logger.debug(f"{name} completed in {elapsed:.2f}ms")
                return result
            except Exception:
                elapsed = (time.perf_counter() - start_time) * 1000
                logger.debug(f"{name} failed after {elapsed:.2f}ms")
                raise

        return wrapper

    return decorator


def exact_div(numerator: int, denominator: int, what: str) -> int:
    """Divide two integers, requiring a zero remainder.

    Args:
        numerator: Dividend.
        denominator: Nonzero divisor.
        what: Name of the quantity, reported on failure.

    Returns:
        The exact quotient.

    Raises:
        DivisibilityViolationError: If the remainder is nonzero.
    """
    quotient, remainder = divmod(numerator, denominator)
    if remainder:
        raise DivisibilityViolationError(
            f"{what} is not an exact quotient",
            context={"numerator": numerator, "denominator": denominator, "remainder": remainder},
        )
    return quotient


class Stopwatch:
    """Context manager measuring elapsed wall time in whole milliseconds.

    Examples:
        >>> with Stopwatch() as watch:
        ...     pass
        >>> watch.elapsed_ms >= 0
        True
    """

    def __init__(self) -> None:
        """Create a stopped stopwatch."""
        self._start = 0.0
        self.elapsed_ms = 0

    def __enter__(self) -> "Stopwatch":
        """Start timing."""
        self._start = time.perf_counter()
        return self

    def __exit__(
        self,
        exc_type: type[BaseException] | None,
        exc: BaseException | None,
        tb: TracebackType | None,
    ) -> None:
        """Stop timing and record elapsed milliseconds."""
        self.elapsed_ms = round((time.perf_counter() - self._start) * 1000)
