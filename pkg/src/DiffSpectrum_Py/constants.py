"""Constants and tags for the differential spectrum toolkit.

This module groups the small enumerations and numeric limits shared by the
closed-form pipeline, the brute-force oracle and the command-line surface.

Constant Categories:
    - CharSign: values of the quadratic character
    - CharSumKind: which character sum is requested
    - Method: closed form, brute force, corollary fast path, or both
    - OutputFormat: CLI rendering
    - ExitCode: CLI exit-code contract
    - Limit classes: caps for primes, extension fields and sweeps
"""

from enum import IntEnum, StrEnum


class CharSign(IntEnum):
    """Value of the quadratic character eta."""

    MINUS = -1  # Nonsquare
    ZERO = 0  # eta(0) = 0 convention
    PLUS = 1  # Nonzero square


class CharSumKind(StrEnum):
    """Character sums evaluated by the charsum module."""

    GAMMA = "gamma"  # sum eta(x(x-1)(x+3))
    LAMBDA1 = "lambda1"  # sum eta((x^2-4)(-3x^2-4))
    LAMBDA2 = "lambda2"  # sum eta((x^2+1)(x^2+4x+1))


class Method(StrEnum):
    """How a spectrum or character sum is obtained."""

    CLOSED = "closed"
    BRUTE = "brute"
    BOTH = "both"
    COROLLARY = "corollary"


class OutputFormat(StrEnum):
    """CLI output formats."""

    JSON = "json"
    CSV = "csv"
    PRETTY = "pretty"


class ExitCode(IntEnum):
    """Process exit codes of the CLI."""

    OK = 0
    INVALID_INPUT = 2
    CAP_EXCEEDED = 3
    MISMATCH = 4
    INTERNAL = 5


class FieldLimits:
    """Size limits for field construction and point counting."""

    SMALLEST_PRIME = 3  # Characteristic 2 is not supported
    CURVE_MIN_PRIME = 5  # The curve y^2 = x(x-1)(x+3) degenerates at p = 3
    PRIME_CAP = 2**31  # Closed-form path: p < 2^31
    BRUTE_CAP = 2**24  # Default bound on p^n for explicit extension fields
    QUADRUPLE_CAP = 2401  # Default bound on p^n for the O(q^2) quadruple count


class TableConstants:
    """Tuning for numpy field tables."""

    CHUNK_ROWS = 1 << 16  # Rows per block when filling exp tables
    RESIDUE_MASK_LIMIT = 1 << 24  # Largest p for a residue lookup table in point counting
    EULER_CHUNK = 1 << 20  # Elements per chunk for vectorized Euler criterion
    MEMORY_FRACTION = 0.5  # Share of available RAM the oracle may claim


class SpectrumConstants:
    """Shape of the spectrum of x^(p^n - 3)."""

    CANONICAL_LENGTH = 6  # omega_0 .. omega_5
    MAX_UNIFORMITY = 5  # 1 <= delta <= 5 for odd p
    FROBENIUS_PERIOD = 12  # lcm of factor degrees of a squarefree quartic


class SweepDefaults:
    """Defaults for verify and sweep runs."""

    MAX_ORDER = 10**5
    VERIFY_SAMPLES = 200
    SWEEP_SAMPLES = 16
    SEED = 0


class OutputConstants:
    """Serialization constants."""

    GAMMA_TABLE_HEADER = "p,gamma_p_1"
