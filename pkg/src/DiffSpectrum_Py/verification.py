"""Cross-check battery comparing the closed form with the oracle.

``verify_field`` runs every check for one (p, n) and returns a report with
one entry per named check; it never raises on a mismatch. ``sweep`` repeats
this over all odd prime powers up to a bound.
"""

from collections.abc import Iterator

import numpy as np

from DiffSpectrum_Py.charsum import CLOSED_SUMS, brute_charsum
from DiffSpectrum_Py.closedform import (
    COROLLARY_PRIMES,
    axis_solution_count,
    big_m,
    big_m_by_inclusion_exclusion,
    closed_spectrum,
    corollary_spectrum,
    eta_profile,
    eta_sqrt2_shift,
    interior_solution_count,
    set_a_size,
    sqrt2_shift_by_root_test,
    t1,
    validate_pair,
)
from DiffSpectrum_Py.config import RuntimeConfig
from DiffSpectrum_Py.constants import CharSign, CharSumKind, FieldLimits, SweepDefaults
from DiffSpectrum_Py.debug_mode import DebugComponent, debug_mode, debug_timing
from DiffSpectrum_Py.exceptions import CapExceededError
from DiffSpectrum_Py.field import FieldCtx, build_tables, odd_prime_powers
from DiffSpectrum_Py.models import VerificationCheck, VerificationReport
from DiffSpectrum_Py.oracle import (
    build_power_table,
    count_gb_roots,
    count_quadruples,
    count_set_a,
    field_sqrt,
    gb_root_counts,
    get_oracle,
    m_from_spectrum,
)


class _Recorder:
    """Collects checks and logs failures as they happen."""

    def __init__(self, p: int, n: int) -> None:
        self.p = p
        self.n = n
        self.checks: list[VerificationCheck] = []

    def record(self, name: str, expected: object, actual: object) -> None:
        passed = expected == actual
        self.checks.append(
            VerificationCheck(name=name, passed=passed, expected=str(expected), actual=str(actual))
        )
        if not passed:
            debug_mode.warning(
                f"Check {name} failed",
                DebugComponent.VERIFY,
                p=self.p,
                n=self.n,
                expected=expected,
                actual=actual,
            )

    def report(self) -> VerificationReport:
        return VerificationReport(p=self.p, n=self.n, checks=tuple(self.checks))


def _sample_bs(q: int, minus_one: int, samples: int, seed: int) -> list[int]:
    """Random indices of b outside {0, 1, -1}."""
    pool = np.setdiff1d(np.arange(1, q, dtype=np.int64), [1, minus_one])
    if samples <= 0 or pool.size == 0:
        return []
    rng = np.random.default_rng(seed)
    return [int(b) for b in rng.choice(pool, size=samples, replace=True)]


@debug_timing(DebugComponent.VERIFY)
def verify_field(
    p: int,
    n: int,
    config: RuntimeConfig | None = None,
    samples: int = SweepDefaults.VERIFY_SAMPLES,
    seed: int = SweepDefaults.SEED,
) -> VerificationReport:
    """Run every cross-check for F_{p^n}.

    Args:
        p: Odd prime.
        n: Extension degree, (p, n) != (3, 1).
        config: Runtime limits; defaults to the environment.
        samples: Random b values for the direct g_b comparison.
        seed: Seed for the sample generator.

    Returns:
        Report listing each named check with expected and actual values.

    Raises:
        InvalidInputError: On bad (p, n).
        CapExceededError: If F_{p^n} exceeds the brute cap.
    """
    config = config or RuntimeConfig.from_env()
    validate_pair(p, n)
    ctx = FieldCtx.build(p, n, cap=config.brute_cap, prime_cap=config.prime_cap)
    tables = build_tables(ctx)
    q, d = ctx.order, ctx.order - 3
    rec = _Recorder(p, n)

    closed = closed_spectrum(p, n)
    oracle = get_oracle(ctx, d, config)
    brute = oracle.report()
    rec.record("spectrum", closed.spectrum.omega, brute.spectrum.omega)

    for which in CharSumKind:
        if which == CharSumKind.GAMMA and p < FieldLimits.CURVE_MIN_PRIME:
            continue
        rec.record(which.value, CLOSED_SUMS[which](p, n), brute_charsum(ctx, which, config))

    a_size = set_a_size(p, n)
    t_counts = gb_root_counts(ctx, config)
    rec.record("set_a", a_size, count_set_a(ctx, config))
    rec.record("set_b", a_size, int(np.count_nonzero(t_counts[1:] == 2)))

    counts = oracle.counts
    negated = tables.neg(tables.elements())
    rec.record("symmetry", True, bool(np.array_equal(counts, counts[negated])))
    rec.record("histogram", (q, 1), (int(counts.sum()), int(counts[0])))

    one, minus_one = 1, int(tables.neg(1))
    bridged = t_counts.copy()
    bridged[0] = 1
    bridged[[one, minus_one]] += 1
    rec.record("gb_bridge", 0, int(np.count_nonzero(counts != bridged)))

    sampled = _sample_bs(q, minus_one, samples, seed)
    misses = sum(
        oracle.count(b) != count_gb_roots(ctx, ctx.element(b), config) for b in sampled
    )
    rec.record("gb_samples", 0, misses)
    rec.record("t1", t1(p, n), count_gb_roots(ctx, ctx.one(), config))

    closed_m = big_m(p, n).value
    rec.record(
        "big_m",
        (closed_m, closed_m, closed_m),
        (
            m_from_spectrum(brute).value,
            m_from_spectrum(closed).value,
            big_m_by_inclusion_exclusion(p, n),
        ),
    )

    prof = eta_profile(p, n)
    if prof.eta2 == CharSign.PLUS and prof.etam7 == CharSign.PLUS:
        root = field_sqrt(ctx, ctx.embed(2), config)
        shifted = ctx.eta(ctx.add(ctx.embed(-1), ctx.mul(ctx.embed(2), root)))
        expected_shift = eta_sqrt2_shift(p, n)
        rec.record(
            "sqrt2_shift",
            (expected_shift,) * 3,
            (shifted, eta_sqrt2_shift(p, n, conjugate=True), sqrt2_shift_by_root_test(p, n)),
        )

    if q <= config.quadruple_cap:
        quads = count_quadruples(ctx, d, config)
        rec.record(
            "quadruples",
            (closed_m, axis_solution_count(p, n), interior_solution_count(p, n)),
            (quads.total, quads.axis, quads.interior),
        )
        rec.record(
            "power_table",
            True,
            bool(
                np.array_equal(
                    oracle.power.pow_d, build_power_table(tables, d, direct=True).pow_d
                )
            ),
        )

    if p in COROLLARY_PRIMES:
        rec.record("corollary", closed.spectrum.omega, corollary_spectrum(p, n).spectrum.omega)

    report = rec.report()
    debug_mode.info(report.summary_line(), DebugComponent.VERIFY)
    return report


def sweep(
    max_order: int = SweepDefaults.MAX_ORDER,
    config: RuntimeConfig | None = None,
    samples: int = SweepDefaults.SWEEP_SAMPLES,
    seed: int = SweepDefaults.SEED,
) -> Iterator[VerificationReport]:
    """Verify every odd prime power 3 < p^n <= max_order, smallest first.

    Raises:
        CapExceededError: If max_order exceeds the brute cap.
    """
    config = config or RuntimeConfig.from_env()
    if max_order > config.brute_cap:
        raise CapExceededError(
            "Sweep bound above the brute cap",
            context={"max_order": max_order, "cap": config.brute_cap},
        )
    for p, n in odd_prime_powers(max_order):
        yield verify_field(p, n, config, samples, seed)
