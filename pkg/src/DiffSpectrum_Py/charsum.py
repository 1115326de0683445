"""Character sums Gamma, lambda1 and lambda2.

Closed values come from the point count N_p of y^2 = x(x-1)(x+3) over F_p and
the integer recurrence for the power sums of the Frobenius eigenvalues:

    s_0 = 2, s_1 = -a, s_k = -a * s_{k-1} - p * s_{k-2},  Gamma_{p,n} = -s_n

with a = N_p - p. Brute values enumerate F_{p^n} through numpy field tables.
"""

from collections.abc import Sequence
from functools import lru_cache

import numpy as np
from numpy.typing import NDArray

from DiffSpectrum_Py.config import RuntimeConfig
from DiffSpectrum_Py.constants import CharSumKind, FieldLimits, Method, TableConstants
from DiffSpectrum_Py.debug_mode import DebugComponent, debug_mode, debug_timing
from DiffSpectrum_Py.exceptions import (
    CapExceededError,
    InvalidInputError,
    InvalidPrimeError,
    ZeroArgumentError,
)
from DiffSpectrum_Py.field import (
    FieldCtx,
    FieldElement,
    FieldTables,
    build_tables,
    eta_base,
    primes_between,
    validate_degree,
    validate_prime,
)
from DiffSpectrum_Py.models import CharSumValue, GammaParams
from DiffSpectrum_Py.utils import timed_operation

# Coefficients constant term first, as residues mod p
BRUTE_POLYNOMIALS: dict[CharSumKind, tuple[int, ...]] = {
    CharSumKind.GAMMA: (0, -3, 2, 1),  # x(x-1)(x+3)
    CharSumKind.LAMBDA1: (16, 0, 8, 0, -3),  # (x^2-4)(-3x^2-4)
    CharSumKind.LAMBDA2: (1, 4, 2, 4, 1),  # (x^2+1)(x^2+4x+1)
}


def _require_curve_prime(p: int) -> None:
    validate_prime(p)
    if p < FieldLimits.CURVE_MIN_PRIME:
        raise InvalidPrimeError("The curve y^2 = x(x-1)(x+3) needs p >= 5", context={"p": p})


def _euler_signs(values: NDArray[np.int64], p: int) -> NDArray[np.int64]:
    """Legendre symbols of an int64 array by vectorized square-and-multiply."""
    result = np.ones_like(values)
    base = values % p
    e = (p - 1) // 2
    while e:
        if e & 1:
            result = result * base % p
        e >>= 1
        if e:
            base = base * base % p
    return np.where(values % p == 0, 0, np.where(result == 1, 1, -1))


@debug_timing(DebugComponent.CHARSUM)
def count_ec_points(p: int) -> int:
    """Count affine points of y^2 = x(x-1)(x+3) over F_p.

    N_p = sum over x of (1 + legendre(x(x-1)(x+3), p)). Primes up to
    ``TableConstants.RESIDUE_MASK_LIMIT`` use a table of squares; larger ones
    apply Euler's criterion chunk by chunk.

    Args:
        p: Odd prime >= 5.

    Returns:
        N_p.

    Raises:
        InvalidPrimeError: If p is not a prime >= 5.
    """
    _require_curve_prime(p)
    total = 0
    if p <= TableConstants.RESIDUE_MASK_LIMIT:
        xs = np.arange(p, dtype=np.int64)
        is_square = np.zeros(p, dtype=bool)
        is_square[xs * xs % p] = True
        values = xs * ((xs - 1) % p) % p * ((xs + 3) % p) % p
        signs = np.where(values == 0, 0, np.where(is_square[values], 1, -1))
        total = int(signs.sum())
    else:
        for start in range(0, p, TableConstants.EULER_CHUNK):
            xs = np.arange(start, min(start + TableConstants.EULER_CHUNK, p), dtype=np.int64)
            values = xs * ((xs - 1) % p) % p * ((xs + 3) % p) % p
            total += int(_euler_signs(values, p).sum())
    debug_mode.debug("Counted curve points", DebugComponent.CHARSUM, p=p, n_points=p + total)
    return p + total


@lru_cache(maxsize=1024)
def gamma_params(p: int) -> GammaParams:
    """Point count and trace a = N_p - p of the curve over F_p."""
    n_points = count_ec_points(p)
    return GammaParams(p=p, n_points=n_points, a=n_points - p)


def gamma(p: int, n: int) -> int:
    """Gamma_{p,n} = sum over F_{p^n} of eta(x(x-1)(x+3)), exactly.

    Args:
        p: Odd prime >= 5.
        n: Extension degree >= 1.

    Returns:
        The character sum as an arbitrary-precision integer.

    Raises:
        InvalidPrimeError: If p < 5.
        InvalidInputError: If n < 1.
    """
    validate_degree(n)
    a = gamma_params(p).a
    s_prev, s = 2, -a
    for _ in range(n - 1):
        s_prev, s = s, -a * s - p * s_prev
    return -s


def lambda1(p: int, n: int) -> int:
    """lambda_{1,p^n} = sum eta((x^2-4)(-3x^2-4))."""
    validate_prime(p)
    validate_degree(n)
    if p == FieldLimits.SMALLEST_PRIME:
        return -eta_base(-1, p, n)
    return gamma(p, n) - eta_base(-3, p, n)


def lambda2(p: int, n: int) -> int:
    """lambda_{2,p^n} = sum eta((x^2+1)(x^2+4x+1))."""
    validate_prime(p)
    validate_degree(n)
    if p == FieldLimits.SMALLEST_PRIME:
        return -1 - eta_base(2, p, n)
    return gamma(p, n) - 1


CLOSED_SUMS = {
    CharSumKind.GAMMA: gamma,
    CharSumKind.LAMBDA1: lambda1,
    CharSumKind.LAMBDA2: lambda2,
}


def supersingular_gamma(p: int, n: int) -> int:
    """Gamma_{p,n} for a supersingular curve (trace a = 0).

    Returns 0 for odd n and -2 * (-1)^(n/2) * p^(n/2) for even n.

    Raises:
        InvalidInputError: If the curve over F_p is not supersingular.
    """
    params = gamma_params(p)
    if params.a != 0:
        raise InvalidInputError(
            "Curve is not supersingular at this prime", context={"p": p, "a": params.a}
        )
    if n % 2:
        return 0
    half = n // 2
    return -2 * (-1) ** half * p**half


@timed_operation("gamma_table")
def gamma_table(max_p: int) -> list[tuple[int, int]]:
    """Rows (p, Gamma_{p,1}) for every prime 5 <= p <= max_p."""
    return [(p, gamma_params(p).a) for p in primes_between(FieldLimits.CURVE_MIN_PRIME, max_p)]


def brute_polynomial_charsum(tables: FieldTables, coeffs: Sequence[int]) -> int:
    """Sum of eta(f(x)) over the whole field by enumeration.

    Args:
        tables: Field tables.
        coeffs: Coefficients of f as element indices, constant term first.

    Returns:
        The exact character sum.
    """
    total = 0
    for start in range(0, tables.order, TableConstants.EULER_CHUNK):
        xs = np.arange(start, min(start + TableConstants.EULER_CHUNK, tables.order), dtype=np.int64)
        total += int(tables.eta(tables.polyval(coeffs, xs)).sum(dtype=np.int64))
    return total


def brute_charsum(ctx: FieldCtx, which: CharSumKind, config: RuntimeConfig | None = None) -> int:
    """Evaluate Gamma, lambda1 or lambda2 by enumerating F_{p^n}.

    Args:
        ctx: Field to enumerate.
        which: Which sum.
        config: Runtime limits; defaults to the environment.

    Returns:
        The exact value.

    Raises:
        CapExceededError: If the field is larger than the brute cap.
    """
    config = config or RuntimeConfig.from_env()
    if ctx.order > config.brute_cap:
        raise CapExceededError(
            "Field too large for enumeration", context={"order": ctx.order, "cap": config.brute_cap}
        )
    tables = build_tables(ctx)
    coeffs = [tables.embed(c) for c in BRUTE_POLYNOMIALS[which]]
    value = brute_polynomial_charsum(tables, coeffs)
    debug_mode.debug("Enumerated character sum", DebugComponent.CHARSUM, which=which, value=value)
    return value


def charsum(
    p: int,
    n: int,
    which: CharSumKind,
    method: Method = Method.CLOSED,
    config: RuntimeConfig | None = None,
) -> CharSumValue:
    """Evaluate one character sum by the closed pipeline or by enumeration.

    Raises:
        InvalidInputError: On bad (p, n) or an unsupported method.
        InvalidPrimeError: If Gamma is requested for p < 5, by either method.
        CapExceededError: If enumeration is requested above the brute cap.
    """
    if which == CharSumKind.GAMMA:
        _require_curve_prime(p)
    if method == Method.CLOSED:
        value = CLOSED_SUMS[which](p, n)
    elif method == Method.BRUTE:
        config = config or RuntimeConfig.from_env()
        ctx = FieldCtx.build(p, n, cap=config.brute_cap, prime_cap=config.prime_cap)
        value = brute_charsum(ctx, which, config)
    else:
        raise InvalidInputError("charsum supports closed or brute", context={"method": method})
    return CharSumValue(value=value, which=which, p=p, n=n)


def quadratic_charsum(ctx: FieldCtx, a2: FieldElement, a1: FieldElement, a0: FieldElement) -> int:
    """Closed value of sum eta(a2 x^2 + a1 x + a0) over F_{p^n}.

    -eta(a2) when the discriminant a1^2 - 4 a0 a2 is nonzero, (q - 1) eta(a2)
    otherwise.

    Raises:
        ZeroArgumentError: If a2 is zero.
    """
    if a2.is_zero:
        raise ZeroArgumentError("Leading coefficient must be nonzero")
    disc = ctx.sub(ctx.mul(a1, a1), ctx.mul(ctx.embed(4), ctx.mul(a0, a2)))
    lead = ctx.eta(a2)
    if disc.is_zero:
        return (ctx.order - 1) * lead
    return -lead
