"""Brute-force ground truth over an explicitly constructed F_{p^n}.

Everything here enumerates the field through numpy tables: the differential
histogram N(b) of x^d, root counts of g_b(x) = x^4 + 2x^3 + x^2 + 2b^-1 x + b^-1,
the set sizes used by the omega_2 count and the quadruple count M. The
closed-form module must match every number produced here.

Thread Safety:
    The histogram pass splits the x-range across a thread pool. Each worker
    owns a private bincount and the partial histograms are summed at the end,
    so the result does not depend on scheduling.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from DiffSpectrum_Py.closedform import m_from_moments
from DiffSpectrum_Py.config import RuntimeConfig
from DiffSpectrum_Py.constants import Method, SpectrumConstants, TableConstants
from DiffSpectrum_Py.debug_mode import DebugComponent, DebugLevel, debug_mode, debug_timing
from DiffSpectrum_Py.exceptions import (
    CapExceededError,
    InternalConsistencyError,
    InvalidInputError,
    NonResidueError,
    ZeroArgumentError,
)
from DiffSpectrum_Py.field import FieldCtx, FieldElement, FieldTables, IndexArray, build_tables
from DiffSpectrum_Py.memory_monitor import (
    MB,
    ensure_memory_available,
    estimate_oracle_memory,
    take_snapshot,
)
from DiffSpectrum_Py.models import QuadrupleCountM, QuadrupleCounts, Spectrum, SpectrumReport


@dataclass(frozen=True, eq=False)
class PowerTable:
    """pow_d[idx(x)] = idx(x^d) for every x."""

    d: int
    pow_d: IndexArray
    generator: int | None


def build_power_table(tables: FieldTables, d: int, *, direct: bool = False) -> PowerTable:
    """Tabulate x -> x^d.

    The default walks the powers of the primitive element: g^k maps to
    g^(kd mod (q - 1)). ``direct`` instead exponentiates every element with
    FieldCtx.pow, which is slow but shares nothing with the table path.
    """
    ctx, q = tables.ctx, tables.order
    if direct:
        pow_d = np.array([ctx.index(ctx.pow(x, d)) for x in ctx.elements()], dtype=np.int64)
        return PowerTable(d, pow_d, None)
    pow_d = np.empty(q, dtype=np.int64)
    steps = np.arange(q - 1, dtype=np.int64)
    pow_d[tables.exp] = tables.exp[steps * (d % (q - 1)) % (q - 1)]
    pow_d[0] = 0 if d > 0 else 1
    return PowerTable(d, pow_d, tables.generator)


def _guard(ctx: FieldCtx, config: RuntimeConfig) -> None:
    if ctx.order > config.brute_cap:
        raise CapExceededError(
            "Field too large for enumeration", context={"order": ctx.order, "cap": config.brute_cap}
        )


class DifferentialOracle:
    """Differential histogram of x^d over one field.

    Examples:
        >>> oracle = DifferentialOracle(FieldCtx.build(5, 2), 22)
        >>> oracle.spectrum().omega
        (8, 11, 4, 2, 0, 0)
    """

    def __init__(self, ctx: FieldCtx, d: int, config: RuntimeConfig | None = None) -> None:
        """Build tables for ctx and the power table for d.

        Args:
            ctx: Field to enumerate.
            d: Exponent >= 1.
            config: Runtime limits; defaults to the environment.

        Raises:
            InvalidInputError: If d < 1.
            CapExceededError: If the field exceeds the brute cap or memory budget.
        """
        if d < 1:
            raise InvalidInputError("Exponent must be positive", context={"d": d})
        self.config = config or RuntimeConfig.from_env()
        _guard(ctx, self.config)
        self.ctx = ctx
        self.d = d
        estimate = estimate_oracle_memory(ctx.order, self.config.workers)
        ensure_memory_available(
            int(estimate["total_mb"] * MB), self.config.memory_fraction, "oracle tables"
        )
        if debug_mode.is_enabled(DebugLevel.TRACE, DebugComponent.ORACLE):
            debug_mode.trace(f"Before tables: {take_snapshot()}", DebugComponent.ORACLE)
        self.tables = build_tables(ctx)
        self.power = build_power_table(self.tables, d)
        self._counts: IndexArray | None = None

    @property
    def order(self) -> int:
        """Field size q."""
        return self.ctx.order

    def derivative(self, xs: IndexArray) -> IndexArray:
        """(x + 1)^d - x^d for each index in xs."""
        pow_d = self.power.pow_d
        return self.tables.sub(pow_d[self.tables.add(xs, 1)], pow_d[xs])

    def _partial_histogram(self, start: int, stop: int) -> IndexArray:
        counts = np.zeros(self.order, dtype=np.int64)
        for lo in range(start, stop, TableConstants.CHUNK_ROWS):
            xs = np.arange(lo, min(lo + TableConstants.CHUNK_ROWS, stop), dtype=np.int64)
            counts += np.bincount(self.derivative(xs), minlength=self.order)
        return counts

    @debug_timing(DebugComponent.ORACLE)
    def _fill_histogram(self) -> IndexArray:
        q = self.order
        blocks = -(-q // TableConstants.CHUNK_ROWS)
        workers = max(1, min(self.config.workers, blocks))
        bounds = [q * i // workers for i in range(workers + 1)]
        with ThreadPoolExecutor(max_workers=workers) as pool:
            partials = list(pool.map(self._partial_histogram, bounds[:-1], bounds[1:]))
        counts = np.sum(partials, axis=0, dtype=np.int64)
        if int(counts.sum()) != q:
            raise InternalConsistencyError("Histogram does not sum to q", context={"q": q})
        debug_mode.debug("Filled histogram", DebugComponent.ORACLE, q=q, d=self.d, workers=workers)
        return counts

    @property
    def counts(self) -> IndexArray:
        """N(b) for every b, indexed by idx(b)."""
        if self._counts is None:
            self._counts = self._fill_histogram()
        return self._counts

    def spectrum(self) -> Spectrum:
        """omega_i = #{b : N(b) = i}.

        For d = q - 3 the vector is padded to six entries.

        Raises:
            InternalConsistencyError: If d = q - 3 and some N(b) exceeds 5.
        """
        omega = tuple(int(w) for w in np.bincount(self.counts))
        spectrum = Spectrum(omega=omega)
        if self.d == self.order - 3:
            if spectrum.delta > SpectrumConstants.MAX_UNIFORMITY:
                raise InternalConsistencyError(
                    "Uniformity above 5 for x^(q-3)",
                    context={"q": self.order, "delta": spectrum.delta},
                )
            spectrum = spectrum.padded(SpectrumConstants.CANONICAL_LENGTH)
        return spectrum

    def report(self) -> SpectrumReport:
        """Brute-force SpectrumReport with M from the second moment."""
        spectrum = self.spectrum()
        return SpectrumReport(
            p=self.ctx.p,
            n=self.ctx.n,
            d=self.d,
            method=Method.BRUTE,
            spectrum=spectrum,
            big_m=m_from_moments(spectrum, self.order),
            modulus=self.ctx.modulus,
        )

    def count(self, b: int) -> int:
        """N(b) by a fresh pass over all x."""
        return int(np.count_nonzero(self.derivative(self.tables.elements()) == b))


@lru_cache(maxsize=4)
def get_oracle(ctx: FieldCtx, d: int, config: RuntimeConfig) -> DifferentialOracle:
    """Cached oracle per (field, exponent, config)."""
    return DifferentialOracle(ctx, d, config)


def _config(config: RuntimeConfig | None) -> RuntimeConfig:
    return config or RuntimeConfig.from_env()


def brute_spectrum(ctx: FieldCtx, d: int, config: RuntimeConfig | None = None) -> SpectrumReport:
    """Differential spectrum of x^d by enumerating every x.

    Raises:
        CapExceededError: If the field exceeds the brute cap.
    """
    return get_oracle(ctx, d, _config(config)).report()


def count_nb(ctx: FieldCtx, b: FieldElement, d: int, config: RuntimeConfig | None = None) -> int:
    """Number of x with (x + 1)^d - x^d = b."""
    return get_oracle(ctx, d, _config(config)).count(ctx.index(b))


def _gb_coefficients(tables: FieldTables, binv: int) -> list[int]:
    two_binv = int(tables.mul(tables.embed(2), binv))
    return [binv, two_binv, 1, tables.embed(2), 1]


def _nonzero_inverse(ctx: FieldCtx, b: FieldElement) -> int:
    if b.is_zero:
        raise ZeroArgumentError("g_b needs b != 0")
    return ctx.index(ctx.inv(b))


def count_gb_roots(ctx: FieldCtx, b: FieldElement, config: RuntimeConfig | None = None) -> int:
    """Distinct roots of g_b in F_{p^n}.

    Raises:
        ZeroArgumentError: If b = 0.
        CapExceededError: If the field exceeds the brute cap.
    """
    binv = _nonzero_inverse(ctx, b)
    _guard(ctx, _config(config))
    tables = build_tables(ctx)
    values = tables.polyval(_gb_coefficients(tables, binv), tables.elements())
    return int(np.count_nonzero(values == 0))


def gb_root_counts(ctx: FieldCtx, config: RuntimeConfig | None = None) -> IndexArray:
    """T_b for every b in one pass; entry 0 is 0.

    A root x of g_b is never 0, -1 or -1/2, and for any other x the unique b
    with g_b(x) = 0 is -(2x + 1) / (x^2 (x + 1)^2).
    """
    _guard(ctx, _config(config))
    tables = build_tables(ctx)
    xs = tables.elements()
    xs1 = tables.add(xs, 1)
    num = tables.add(tables.mul(2, xs), 1)
    keep = (xs != 0) & (xs1 != 0) & (num != 0)
    xs, xs1, num = xs[keep], xs1[keep], num[keep]
    den = tables.mul(tables.mul(xs, xs), tables.mul(xs1, xs1))
    bs = tables.neg(tables.mul(num, tables.inv(den)))
    return np.bincount(bs, minlength=tables.order).astype(np.int64)


def gb_multiple_roots(
    ctx: FieldCtx, b: FieldElement, config: RuntimeConfig | None = None
) -> list[int]:
    """Indices of x with g_b(x) = g_b'(x) = 0."""
    binv = _nonzero_inverse(ctx, b)
    _guard(ctx, _config(config))
    tables = build_tables(ctx)
    xs = tables.elements()
    value = tables.polyval(_gb_coefficients(tables, binv), xs)
    slope_coeffs = [int(tables.mul(tables.embed(2), binv))] + [tables.embed(c) for c in (2, 6, 4)]
    slope = tables.polyval(slope_coeffs, xs)
    return [int(x) for x in xs[(value == 0) & (slope == 0)]]


def count_set_a(ctx: FieldCtx, config: RuntimeConfig | None = None) -> int:
    """#{a : eta(a^2 - 4) = 1 and eta(-3a^2 - 4) = -1}."""
    _guard(ctx, _config(config))
    tables = build_tables(ctx)
    a = tables.elements()
    sq = tables.mul(a, a)
    first = tables.eta(tables.sub(sq, 4 % ctx.p))
    second = tables.eta(tables.sub(tables.mul(tables.neg(3 % ctx.p), sq), 4 % ctx.p))
    return int(np.count_nonzero((first == 1) & (second == -1)))


def count_set_b(ctx: FieldCtx, config: RuntimeConfig | None = None) -> int:
    """#{b != 0 : T_b = 2}."""
    counts = gb_root_counts(ctx, config)
    return int(np.count_nonzero(counts[1:] == 2))


def field_sqrt(ctx: FieldCtx, c: FieldElement, config: RuntimeConfig | None = None) -> FieldElement:
    """Square root of c with the smallest index.

    Raises:
        NonResidueError: If c is not a square.
    """
    _guard(ctx, _config(config))
    tables = build_tables(ctx)
    xs = tables.elements()
    roots = xs[tables.mul(xs, xs) == ctx.index(c)]
    if roots.size == 0:
        raise NonResidueError("Element is not a square", context={"c": ctx.index(c)})
    return ctx.element(int(roots[0]))


@debug_timing(DebugComponent.ORACLE)
def count_quadruples(ctx: FieldCtx, d: int, config: RuntimeConfig | None = None) -> QuadrupleCounts:
    """Enumerate solutions of x1 - x2 + x3 - x4 = 0 = x1^d - x2^d + x3^d - x4^d.

    Grouping pairs (x1, x3) by (x1 + x3, x1^d + x3^d), M is the sum of the
    squared class sizes. The interior count repeats this over nonzero pairs.

    Raises:
        CapExceededError: If q exceeds the quadruple cap.
    """
    config = _config(config)
    q = ctx.order
    if q > config.quadruple_cap:
        raise CapExceededError(
            "Field too large for quadruple enumeration",
            context={"order": q, "cap": config.quadruple_cap},
        )
    tables = build_tables(ctx)
    pow_d = build_power_table(tables, d).pow_d
    classes = np.zeros(q * q, dtype=np.int64)
    interior = np.zeros(q * q, dtype=np.int64)
    axis = 0
    x3 = tables.elements()
    rows = max(1, TableConstants.CHUNK_ROWS // q)
    for start in range(0, q, rows):
        x1 = np.arange(start, min(start + rows, q), dtype=np.int64)[:, None]
        s = tables.add(x1, x3[None, :])
        t = tables.add(pow_d[x1], pow_d[x3][None, :])
        keys = (s * q + t).ravel()
        classes += np.bincount(keys, minlength=q * q)
        nonzero = ((x1 != 0) & (x3[None, :] != 0)).ravel()
        interior += np.bincount(keys[nonzero], minlength=q * q)
        axis += int(np.count_nonzero(pow_d[s] == t))
    return QuadrupleCounts(
        total=int((classes * classes).sum()),
        axis=axis,
        interior=int((interior * interior).sum()),
    )


def l0_count(ctx: FieldCtx, config: RuntimeConfig | None = None) -> int:
    """N(1) for d = q - 3, equal to 1 + T_1."""
    return count_nb(ctx, ctx.one(), ctx.order - 3, config)


def m_from_spectrum(report: SpectrumReport) -> QuadrupleCountM:
    """M = (q - 1) * sum(i^2 omega_i) + q^2."""
    return m_from_moments(report.spectrum, report.order)
