"""Memory estimation and guarding for oracle tables.

The oracle materializes several int64 arrays of length p^n plus one private
histogram per worker. Before building them we compare an estimate with the
memory psutil reports as available and refuse early instead of thrashing.
"""

import gc
from dataclasses import dataclass

import psutil

from DiffSpectrum_Py.debug_mode import DebugComponent, debug_mode
from DiffSpectrum_Py.exceptions import CapExceededError

BYTES_PER_ENTRY = 8  # int64 tables
MB = 1024 * 1024
SHARED_TABLES = 5  # exp, log, power table, histogram, scratch


@dataclass(frozen=True)
class MemorySnapshot:
    """Process memory usage snapshot."""

    rss_mb: float  # Resident Set Size in MB
    available_mb: float  # System memory available in MB

    def __str__(self) -> str:
        """Format memory snapshot as string."""
        return f"Memory: RSS={self.rss_mb:.1f}MB, available={self.available_mb:.1f}MB"


def take_snapshot() -> MemorySnapshot:
    """Take a memory snapshot of this process."""
    gc.collect()
    rss = psutil.Process().memory_info().rss
    available = psutil.virtual_memory().available
    return MemorySnapshot(rss_mb=rss / MB, available_mb=available / MB)


def estimate_oracle_memory(order: int, workers: int = 1) -> dict[str, float]:
    """Estimate memory needed by the oracle for one field.

    Args:
        order: Field size p^n.
        workers: Number of workers, each holding a private histogram.

    Returns:
        Dictionary with ``tables_mb``, ``histograms_mb`` and ``total_mb``.
    """
    tables_mb = order * BYTES_PER_ENTRY * SHARED_TABLES / MB
    histograms_mb = order * BYTES_PER_ENTRY * max(workers, 1) / MB
    return {
        "tables_mb": tables_mb,
        "histograms_mb": histograms_mb,
        "total_mb": tables_mb + histograms_mb,
    }


def ensure_memory_available(required_bytes: int, fraction: float, what: str) -> None:
    """Refuse an allocation that would exceed the allowed share of free memory.

    Args:
        required_bytes: Estimated bytes needed.
        fraction: Share of currently available memory that may be used.
        what: Description of the allocation for the error message.

    Raises:
        CapExceededError: If the estimate exceeds the budget.
    """
    available = psutil.virtual_memory().available
    budget = int(available * fraction)
    debug_mode.trace(
        "Memory check",
        DebugComponent.ORACLE,
        what=what,
        required_mb=f"{required_bytes / MB:.1f}",
        budget_mb=f"{budget / MB:.1f}",
    )
    if required_bytes > budget:
        raise CapExceededError(
            f"Not enough memory for {what}",
            context={
                "required_mb": round(required_bytes / MB, 1),
                "budget_mb": round(budget / MB, 1),
            },
        )
