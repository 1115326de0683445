"""Closed-form differential spectrum of x^(p^n - 3) over F_{p^n}.

Pipeline: T1 -> omega5, omega3, omega2 -> M -> solve the linear system for
omega0, omega1, omega4. Only base-field characters are evaluated (through
``eta_base``), so the extension field is never built and n may be arbitrarily
large. Every division is exact and checked; every case split must select
exactly one case.
"""

from functools import lru_cache

from DiffSpectrum_Py.charsum import gamma, lambda1, lambda2
from DiffSpectrum_Py.constants import CharSign, FieldLimits, Method, SpectrumConstants
from DiffSpectrum_Py.debug_mode import DebugComponent, debug_mode, debug_timing
from DiffSpectrum_Py.exceptions import (
    BranchNotExhaustiveError,
    InternalConsistencyError,
    UnsupportedInputError,
)
from DiffSpectrum_Py.field import (
    eta_base,
    has_root_in_extension,
    legendre,
    sqrt_mod_p,
    validate_degree,
    validate_prime,
)
from DiffSpectrum_Py.models import EtaProfile, QuadrupleCountM, Spectrum, SpectrumReport
from DiffSpectrum_Py.utils import exact_div

COROLLARY_PRIMES = (3, 5, 7)
SUPERSINGULAR_SEVEN = 7  # Special cases of T1 and omega2


def validate_pair(p: int, n: int) -> None:
    """Reject characteristic 2, bad primes, n < 1 and the degenerate (3, 1).

    Raises:
        InvalidInputError: Or its UnsupportedInputError subclass.
    """
    validate_prime(p)
    validate_degree(n)
    if p == FieldLimits.SMALLEST_PRIME and n == 1:
        raise UnsupportedInputError(
            "(p, n) = (3, 1) gives the exponent d = 0", context={"p": p, "n": n}
        )


def eta_sqrt2_shift(p: int, n: int, *, conjugate: bool = False) -> CharSign | None:
    """eta(-1 + 2*sqrt(2)) in F_{p^n}, or None unless eta(2) = +1.

    When 2 is a square mod p the value is lifted from F_p. Otherwise sqrt(2)
    lives in F_{p^2}, n is even, and the character of -1 + 2*sqrt(2) there is
    the Legendre symbol of its norm -7.

    Args:
        p: Odd prime.
        n: Extension degree.
        conjugate: Use the other square root p - s.

    Returns:
        The character value, or None when eta(2) != +1.
    """
    if eta_base(2, p, n) != CharSign.PLUS:
        return None
    if legendre(2, p) == CharSign.PLUS:
        s = sqrt_mod_p(2, p)
        if conjugate:
            s = p - s
        return eta_base(-1 + 2 * s, p, n)
    if legendre(-7, p) == CharSign.PLUS or n % 4 == 0:
        return CharSign.PLUS
    return CharSign.MINUS


def sqrt2_shift_by_root_test(p: int, n: int) -> CharSign | None:
    """Decide eta(-1 + 2*sqrt(2)) from whether x^4 + 2x^2 - 7 has a root in F_{p^n}.

    The roots satisfy x^2 = -1 +- 2*sqrt(2). The answer is meaningful only when
    eta(-7) = +1, so that both conjugates share one character. Roots have
    degree at most 4, so F_{p^n} may be replaced by F_{p^k} with k = n mod 12.
    """
    if eta_base(2, p, n) != CharSign.PLUS:
        return None
    quartic = (-7 % p, 0, 2, 0, 1)
    k = n % SpectrumConstants.FROBENIUS_PERIOD or SpectrumConstants.FROBENIUS_PERIOD
    return CharSign.PLUS if has_root_in_extension(quartic, p, k) else CharSign.MINUS


@lru_cache(maxsize=4096)
def eta_profile(p: int, n: int) -> EtaProfile:
    """Characters of 2, -7, -1, -3, 6, -2 and -1 + 2*sqrt(2) in F_{p^n}."""
    return EtaProfile(
        p=p,
        n=n,
        eta2=eta_base(2, p, n),
        etam7=eta_base(-7, p, n),
        etam1=eta_base(-1, p, n),
        etam3=eta_base(-3, p, n),
        eta6=eta_base(6, p, n),
        etam2=eta_base(-2, p, n),
        eta_sqrt2shift=eta_sqrt2_shift(p, n),
    )


def t1(p: int, n: int) -> int:
    """Number of roots of g_1(x) = x^4 + 2x^3 + x^2 + 2x + 1 in F_{p^n}.

    Raises:
        BranchNotExhaustiveError: If the conditions do not select exactly one value.
    """
    validate_pair(p, n)
    prof = eta_profile(p, n)
    e2, em7, shift = prof.eta2, prof.etam7, prof.eta_sqrt2shift
    plus, minus = CharSign.PLUS, CharSign.MINUS
    cases = {
        0: e2 == minus or (e2 == plus and em7 == plus and shift == minus),
        1: p == SUPERSINGULAR_SEVEN and n % 2 == 1,
        2: e2 == plus and em7 == minus,
        3: p == SUPERSINGULAR_SEVEN and n % 2 == 0,
        4: e2 == plus and em7 == plus and shift == plus,
    }
    fired = [value for value, hit in cases.items() if hit]
    if len(fired) != 1:
        raise BranchNotExhaustiveError("T1 case split", context={"p": p, "n": n, "fired": fired})
    return fired[0]


def omega5(p: int, n: int) -> int:
    """omega_5: 2 when eta(2) = eta(-7) = eta(-1 + 2*sqrt(2)) = 1, else 0."""
    prof = eta_profile(p, n)
    plus = CharSign.PLUS
    value = 2 if prof.eta2 == plus and prof.etam7 == plus and prof.eta_sqrt2shift == plus else 0
    if (value == 2) != (t1(p, n) == 4):
        raise InternalConsistencyError("omega5 disagrees with T1", context={"p": p, "n": n})
    return value


def omega3_product_form(p: int, n: int) -> int:
    """omega_3 as one product of characters.

    eta(7)^2 eta(3)^2 ((1 + eta(2))(1 - eta(-7)) + (1 + eta(-2))(1 + eta(-3))) / 2
    """

    def e(c: int) -> int:
        return eta_base(c, p, n)

    mask = e(7) ** 2 * e(3) ** 2
    inner = (1 + e(2)) * (1 - e(-7)) + (1 + e(-2)) * (1 + e(-3))
    return exact_div(mask * inner, 2, "omega3 product form")


def omega3(p: int, n: int) -> int:
    """omega_3 in {0, 2, 4}: 2 for each of the conditions C1 and C2.

    C1: eta(2) = 1 and eta(-7) = -1. C2: eta(-3) = eta(6) = 1 and p != 7.

    Raises:
        InternalConsistencyError: If the product form disagrees.
    """
    validate_pair(p, n)
    prof = eta_profile(p, n)
    c1 = prof.eta2 == CharSign.PLUS and prof.etam7 == CharSign.MINUS
    c2 = prof.etam3 == CharSign.PLUS and prof.eta6 == CharSign.PLUS and p != SUPERSINGULAR_SEVEN
    value = 2 * c1 + 2 * c2
    product = omega3_product_form(p, n)
    if value != product:
        raise InternalConsistencyError(
            "omega3 case split disagrees with the product form",
            context={"p": p, "n": n, "cases": value, "product": product},
        )
    return value


def set_a_size(p: int, n: int) -> int:
    """Size of {a : eta(a^2 - 4) = 1, eta(-3a^2 - 4) = -1}.

    For p >= 5 this is A = (q - 5 - lambda1 - eta(-3) + 2 eta(-1)) / 4.
    """
    validate_pair(p, n)
    q = p**n
    if p == FieldLimits.SMALLEST_PRIME:
        return 0 if n % 2 == 0 else exact_div(q - 3, 2, "|A| for p = 3")
    numerator = q - 5 - lambda1(p, n) - eta_base(-3, p, n) + 2 * eta_base(-1, p, n)
    return exact_div(numerator, 4, "A")


def omega2(p: int, n: int) -> int:
    """omega_2.

    p = 3: 0 for n even, (3^n - 3)/2 for n odd. Otherwise A + 2 when p = 7 and
    n is odd, A - 2 when eta(2) = 1 and eta(-7) = -1, and A otherwise.

    Raises:
        DivisibilityViolationError: If 4A is not divisible by 4.
        BranchNotExhaustiveError: If both adjustments apply.
    """
    a_size = set_a_size(p, n)
    if p == FieldLimits.SMALLEST_PRIME:
        return a_size
    prof = eta_profile(p, n)
    seven_odd = p == SUPERSINGULAR_SEVEN and n % 2 == 1
    c1 = prof.eta2 == CharSign.PLUS and prof.etam7 == CharSign.MINUS
    if seven_odd and c1:
        raise BranchNotExhaustiveError("omega2 case split", context={"p": p, "n": n})
    if seven_odd:
        return a_size + 2
    if c1:
        return a_size - 2
    return a_size


def _bracket_shift(p: int, n: int) -> int:
    """-2 eta(-1) - eta(-3)(2 + eta(-3)), shared by M and its parts."""
    em1, em3 = eta_base(-1, p, n), eta_base(-3, p, n)
    return -2 * em1 - em3 * (2 + em3)


def big_m(p: int, n: int) -> QuadrupleCountM:
    """Number M of solutions of x1 - x2 + x3 - x4 = 0 = x1^d - x2^d + x3^d - x4^d.

    M = 1 + (q - 1)(3q + lambda2 + 4 T1 - 4 - 2 eta(-1) - eta(-3)(2 + eta(-3))).
    """
    validate_pair(p, n)
    q = p**n
    value = 1 + (q - 1) * (3 * q + lambda2(p, n) + 4 * t1(p, n) - 4 + _bracket_shift(p, n))
    return QuadrupleCountM(value=value, order=q)


def axis_solution_count(p: int, n: int) -> int:
    """Solutions with one fixed coordinate zero: q + (1 + T1)(q - 1)."""
    q = p**n
    return q + (1 + t1(p, n)) * (q - 1)


def interior_solution_count(p: int, n: int) -> int:
    """Solutions with all four coordinates nonzero."""
    q = p**n
    return (q - 1) * (3 * q - 8 + _bracket_shift(p, n) + lambda2(p, n))


def big_m_by_inclusion_exclusion(p: int, n: int) -> int:
    """M assembled from the interior and the four coordinate hyperplanes.

    Of the six pairwise intersections four have q points and two (x1 = x3 = 0
    and x2 = x4 = 0) only the origin, since d is even. Triple intersections
    and the full intersection are the origin.
    """
    q = p**n
    return interior_solution_count(p, n) + 4 * axis_solution_count(p, n) - (4 * q + 2) + 4 - 1


def m_from_moments(spectrum: Spectrum, order: int) -> QuadrupleCountM:
    """M = (q - 1) * sum(i^2 omega_i) + q^2."""
    return QuadrupleCountM(value=(order - 1) * spectrum.moment(2) + order * order, order=order)


@debug_timing(DebugComponent.CLOSEDFORM)
def closed_spectrum(p: int, n: int) -> SpectrumReport:
    """Differential spectrum of x^(p^n - 3) from the closed-form pipeline.

    Args:
        p: Odd prime.
        n: Extension degree, with (p, n) != (3, 1).

    Returns:
        Report with six omega entries and every intermediate value.

    Raises:
        UnsupportedInputError: For p = 2 or (p, n) = (3, 1).
        DivisibilityViolationError: If a division in the solver is inexact.
        InternalConsistencyError: If an omega comes out negative.
    """
    validate_pair(p, n)
    q = p**n
    prof = eta_profile(p, n)
    w5, w3, w2 = omega5(p, n), omega3(p, n), omega2(p, n)
    m = big_m(p, n)
    k = m.value - 2 * q * q + q
    u = q - 1
    w0 = exact_div(k + 2 * u * (w2 + w3) - 4 * u * w5, 4 * u, "omega0")
    w1 = exact_div(
        -m.value + 5 * q * q - 4 * q - 4 * u * w2 - 3 * u * w3 + 5 * u * w5, 3 * u, "omega1"
    )
    w4 = exact_div(k - 2 * u * w2 - 6 * u * w3 - 20 * u * w5, 12 * u, "omega4")
    omega = (w0, w1, w2, w3, w4, w5)
    if min(omega) < 0:
        raise InternalConsistencyError(
            "Negative spectrum entry", context={"p": p, "n": n, "omega": omega}
        )

    debug_mode.debug("Solved spectrum", DebugComponent.CLOSEDFORM, p=p, n=n, omega5=w5, omega3=w3)
    curve = p >= FieldLimits.CURVE_MIN_PRIME
    return SpectrumReport(
        p=p,
        n=n,
        d=q - 3,
        method=Method.CLOSED,
        spectrum=Spectrum(omega=omega),
        big_m=m,
        gamma=gamma(p, n) if curve else None,
        lambda1=lambda1(p, n),
        lambda2=lambda2(p, n),
        t1=t1(p, n),
        eta=prof,
    )


def _corollary_omega(p: int, n: int) -> tuple[int, ...]:
    q = p**n
    if p == FieldLimits.SMALLEST_PRIME:
        if n % 2:
            half = exact_div(q - 3, 2, "omega0")
            return (half, 3, half, 0, 0, 0)
        if n % 4 == 2:
            return (
                exact_div(q - 9, 4, "omega0"),
                exact_div(2 * q, 3, "omega1") + 3,
                0,
                0,
                exact_div(q - 9, 12, "omega4"),
                0,
            )
        return (
            exact_div(q - 1, 4, "omega0"),
            exact_div(2 * q, 3, "omega1") + 1,
            0,
            0,
            exact_div(q - 33, 12, "omega4"),
            2,
        )
    if p == 5:
        g = gamma(5, n)
        w2 = exact_div(q - g - 3, 4, "omega2")
        if n % 2:
            return (
                exact_div(3 * q + g - 17, 8, "omega0"),
                exact_div(q + 10, 3, "omega1"),
                w2,
                0,
                exact_div(q + 3 * g - 11, 24, "omega4"),
                0,
            )
        if n % 4 == 2:
            return (
                exact_div(3 * q + g - 17, 8, "omega0"),
                exact_div(q + 8, 3, "omega1"),
                w2,
                2,
                exact_div(q + 3 * g - 43, 24, "omega4"),
                0,
            )
        return (
            exact_div(3 * q + g - 1, 8, "omega0"),
            exact_div(q + 2, 3, "omega1"),
            w2,
            2,
            exact_div(q + 3 * g - 91, 24, "omega4"),
            2,
        )
    if n % 2:
        return (
            exact_div(3 * q - 5, 8, "omega0"),
            exact_div(q + 2, 3, "omega1"),
            exact_div(q + 1, 4, "omega2"),
            0,
            exact_div(q - 7, 24, "omega4"),
            0,
        )
    r = (-7) ** (n // 2)
    return (
        exact_div(3 * q - 2 * r - 1, 8, "omega0"),
        exact_div(q + 2, 3, "omega1"),
        exact_div(q + 2 * r - 3, 4, "omega2"),
        0,
        exact_div(q - 6 * r + 5, 24, "omega4"),
        0,
    )


def corollary_spectrum(p: int, n: int) -> SpectrumReport:
    """Spectrum from the explicit formulas for p = 3, 5 and 7.

    An implementation independent of the general solver; tests require both
    to agree.

    Raises:
        UnsupportedInputError: If p is not 3, 5 or 7, or (p, n) = (3, 1).
    """
    validate_pair(p, n)
    if p not in COROLLARY_PRIMES:
        raise UnsupportedInputError(
            "Explicit formulas exist only for p in {3, 5, 7}", context={"p": p}
        )
    q = p**n
    spectrum = Spectrum(omega=_corollary_omega(p, n))
    return SpectrumReport(
        p=p,
        n=n,
        d=q - 3,
        method=Method.COROLLARY,
        spectrum=spectrum,
        big_m=m_from_moments(spectrum, q),
        gamma=gamma(p, n) if p >= FieldLimits.CURVE_MIN_PRIME else None,
        lambda1=lambda1(p, n),
        lambda2=lambda2(p, n),
    )


def differential_uniformity(p: int, n: int) -> int:
    """Largest omega index with a nonzero count."""
    return closed_spectrum(p, n).spectrum.delta
