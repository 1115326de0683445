"""Data models for the differential spectrum toolkit.

Pydantic models for every value that crosses a module boundary. Each model
validates the invariants that can be checked locally, so an inconsistent
report cannot be constructed.

Examples:
    Building a spectrum::

        spectrum = Spectrum(omega=(236, 209, 152, 2, 24, 2))
        assert spectrum.delta == 5
"""

from typing import Any, Literal, Self

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from DiffSpectrum_Py.constants import CharSign, CharSumKind, Method
from DiffSpectrum_Py.exceptions import MismatchError


def as_decimal(value: int | None) -> str | None:
    """Serialize an arbitrary-precision integer as a decimal string."""
    return None if value is None else str(value)


class GammaParams(BaseModel):
    """Point count of y^2 = x(x-1)(x+3) over F_p and its trace.

    Attributes:
        p: Odd prime, at least 5.
        n_points: Number of affine solutions (x, y) in F_p^2.
        a: Trace N_p - p, equal to the character sum over F_p.
    """

    model_config = ConfigDict(frozen=True)

    p: int = Field(..., ge=5)
    n_points: int = Field(..., ge=0)
    a: int

    @model_validator(mode="after")
    def check_trace(self) -> Self:
        """Check a = N_p - p and the Hasse bound a^2 < 4p.

        Returns:
            Self: The validated model.

        Raises:
            ValueError: If either relation fails.
        """
        if self.a != self.n_points - self.p:
            raise ValueError(f"a={self.a} differs from N_p - p = {self.n_points - self.p}")
        if self.a * self.a >= 4 * self.p:
            raise ValueError(f"a={self.a} violates a^2 < 4p for p={self.p}")
        return self


class CharSumValue(BaseModel):
    """A computed character sum with its provenance."""

    model_config = ConfigDict(frozen=True)

    value: int
    which: CharSumKind
    p: int = Field(..., ge=3)
    n: int = Field(..., ge=1)

    @model_validator(mode="after")
    def check_weil_bound(self) -> Self:
        """Check |value| <= 2 p^(n/2) + 2 with exact integer arithmetic.

        Returns:
            Self: The validated model.

        Raises:
            ValueError: If the bound is exceeded.
        """
        excess = abs(self.value) - 2
        if excess > 0 and excess * excess > 4 * self.p**self.n:
            raise ValueError(f"{self.which}={self.value} exceeds the Weil bound for p^n")
        return self


class EtaProfile(BaseModel):
    """Quadratic character values of the constants used by the case splits.

    ``eta_sqrt2shift`` is None (not applicable) unless eta(2) = +1.
    """

    model_config = ConfigDict(frozen=True)

    p: int = Field(..., ge=3)
    n: int = Field(..., ge=1)
    eta2: CharSign
    etam7: CharSign
    etam1: CharSign
    etam3: CharSign
    eta6: CharSign
    etam2: CharSign
    eta_sqrt2shift: CharSign | None

    @model_validator(mode="after")
    def check_multiplicativity(self) -> Self:
        """Check eta(-2) = eta(-1)eta(2), eta(6) = eta(-2)eta(-3) and applicability.

        Returns:
            Self: The validated model.

        Raises:
            ValueError: If the profile is inconsistent.
        """
        if self.etam1 and self.eta2 and self.etam2 != self.etam1 * self.eta2:
            raise ValueError("eta(-2) != eta(-1) * eta(2)")
        if self.etam2 and self.etam3 and self.eta6 != self.etam2 * self.etam3:
            raise ValueError("eta(6) != eta(-2) * eta(-3)")
        if (self.eta_sqrt2shift is None) != (self.eta2 != CharSign.PLUS):
            raise ValueError("eta(-1+2*sqrt(2)) is defined exactly when eta(2) = 1")
        return self


class Spectrum(BaseModel):
    """Differential spectrum [omega_0, ..., omega_k].

    ``omega[i]`` counts the b hit exactly i times by the derivative. Trailing
    zeros are allowed; ``delta`` is derived from the contents, not the length.
    """

    model_config = ConfigDict(frozen=True)

    omega: tuple[int, ...]

    @field_validator("omega")
    @classmethod
    def check_entries(cls, v: tuple[int, ...]) -> tuple[int, ...]:
        """Require a nonempty vector of nonnegative counts.

        Args:
            v: Candidate omega vector.

        Returns:
            tuple[int, ...]: The vector unchanged.

        Raises:
            ValueError: If empty or any entry is negative.
        """
        if not v:
            raise ValueError("spectrum must have at least one entry")
        if any(w < 0 for w in v):
            raise ValueError(f"spectrum entries must be nonnegative: {v}")
        return v

    @model_validator(mode="after")
    def check_first_moments(self) -> Self:
        """Require sum(omega_i) = sum(i * omega_i); both count the field.

        Returns:
            Self: The validated model.

        Raises:
            ValueError: If the two moments differ.
        """
        if self.moment(0) != self.moment(1):
            raise ValueError("sum omega_i != sum i*omega_i")
        return self

    @property
    def order(self) -> int:
        """Field size implied by the spectrum."""
        return sum(self.omega)

    @property
    def delta(self) -> int:
        """Differential uniformity: largest i with omega_i > 0."""
        return max(i for i, w in enumerate(self.omega) if w > 0)

    def moment(self, k: int) -> int:
        """Return sum of i^k * omega_i."""
        return sum(i**k * w for i, w in enumerate(self.omega))

    def omega_at(self, i: int) -> int:
        """Return omega_i, zero past the stored length."""
        return self.omega[i] if i < len(self.omega) else 0

    def padded(self, length: int) -> "Spectrum":
        """Return the spectrum zero-padded to at least ``length`` entries."""
        if len(self.omega) >= length:
            return self
        return Spectrum(omega=self.omega + (0,) * (length - len(self.omega)))

    def same_as(self, other: "Spectrum") -> bool:
        """Compare entrywise, ignoring trailing zeros."""
        size = max(len(self.omega), len(other.omega))
        return self.padded(size).omega == other.padded(size).omega


class QuadrupleCountM(BaseModel):
    """Number M of solutions of x1 - x2 + x3 - x4 = 0 = x1^d - x2^d + x3^d - x4^d."""

    model_config = ConfigDict(frozen=True)

    value: int = Field(..., ge=1)
    order: int = Field(..., ge=3)

    @model_validator(mode="after")
    def check_congruence(self) -> Self:
        """Check M = 1 (mod q - 1).

        Returns:
            Self: The validated model.

        Raises:
            ValueError: If the congruence fails.
        """
        if (self.value - 1) % (self.order - 1):
            raise ValueError(f"M={self.value} is not 1 mod q-1 for q={self.order}")
        return self


class QuadrupleCounts(BaseModel):
    """Enumerated sizes of the quadruple solution set and its parts.

    Attributes:
        total: M, all solutions.
        axis: Solutions with x4 = 0 (equal for every coordinate).
        interior: Solutions with x1 x2 x3 x4 != 0.
    """

    model_config = ConfigDict(frozen=True)

    total: int = Field(..., ge=0)
    axis: int = Field(..., ge=0)
    interior: int = Field(..., ge=0)


class SpectrumReport(BaseModel):
    """All intermediate quantities for one (p, n) and exponent d.

    Closed-form reports carry every field; brute-force reports for an
    arbitrary exponent carry only the spectrum, M and the modulus.
    """

    model_config = ConfigDict(frozen=True)

    p: int = Field(..., ge=3)
    n: int = Field(..., ge=1)
    d: int = Field(..., ge=0)
    method: Method
    spectrum: Spectrum
    big_m: QuadrupleCountM
    gamma: int | None = None
    lambda1: int | None = None
    lambda2: int | None = None
    t1: int | None = Field(default=None, ge=0, le=4)
    eta: EtaProfile | None = None
    modulus: tuple[int, ...] | None = None

    @model_validator(mode="after")
    def check_moments(self) -> Self:
        """Check sum omega_i = q and (q - 1) * sum i^2 omega_i = M - q^2.

        Returns:
            Self: The validated model.

        Raises:
            ValueError: If either identity fails.
        """
        q = self.order
        if self.spectrum.order != q:
            raise ValueError(f"spectrum sums to {self.spectrum.order}, expected {q}")
        if (q - 1) * self.spectrum.moment(2) != self.big_m.value - q * q:
            raise ValueError("second moment does not match M")
        return self

    @property
    def order(self) -> int:
        """Field size p^n."""
        return self.p**self.n

    @property
    def omega0(self) -> int:
        """omega_0."""
        return self.spectrum.omega_at(0)

    @property
    def omega1(self) -> int:
        """omega_1."""
        return self.spectrum.omega_at(1)

    @property
    def omega2(self) -> int:
        """omega_2."""
        return self.spectrum.omega_at(2)

    @property
    def omega3(self) -> int:
        """omega_3."""
        return self.spectrum.omega_at(3)

    @property
    def omega4(self) -> int:
        """omega_4."""
        return self.spectrum.omega_at(4)

    @property
    def omega5(self) -> int:
        """omega_5."""
        return self.spectrum.omega_at(5)

    def to_result(self) -> dict[str, Any]:
        """Return the JSON result object with a fixed key order.

        Integers that may exceed 2^53 are decimal strings.
        """
        result: dict[str, Any] = {
            "method": self.method.value,
            "d": as_decimal(self.d),
            "gamma": as_decimal(self.gamma),
            "lambda1": as_decimal(self.lambda1),
            "lambda2": as_decimal(self.lambda2),
            "T1": self.t1,
            "omega5": self.omega5,
            "omega3": self.omega3,
            "omega2": as_decimal(self.omega2),
            "M": as_decimal(self.big_m.value),
            "omega0": as_decimal(self.omega0),
            "omega1": as_decimal(self.omega1),
            "omega4": as_decimal(self.omega4),
            "delta": self.spectrum.delta,
            "spectrum": [str(w) for w in self.spectrum.omega],
        }
        if self.modulus is not None:
            result["modulus"] = list(self.modulus)
        return result

    def require_same(self, other: "SpectrumReport") -> None:
        """Raise unless other has the same field and the same spectrum.

        Args:
            other: Report from an independent computation.

        Raises:
            MismatchError: If the spectra differ.
        """
        if (self.p, self.n) == (other.p, other.n) and self.spectrum.same_as(other.spectrum):
            return
        raise MismatchError(
            f"{self.method.value} and {other.method.value} spectra differ",
            context={
                "p": self.p,
                "n": self.n,
                self.method.value: list(self.spectrum.omega),
                other.method.value: list(other.spectrum.omega),
            },
        )


class VerificationCheck(BaseModel):
    """Outcome of one cross-check."""

    model_config = ConfigDict(frozen=True)

    name: str
    passed: bool
    expected: str
    actual: str


class VerificationReport(BaseModel):
    """All cross-checks run for one field."""

    model_config = ConfigDict(frozen=True)

    p: int
    n: int
    checks: tuple[VerificationCheck, ...]

    @property
    def passed(self) -> bool:
        """True when every check passed."""
        return all(check.passed for check in self.checks)

    @property
    def failures(self) -> list[VerificationCheck]:
        """Checks that failed."""
        return [check for check in self.checks if not check.passed]

    def summary_line(self) -> str:
        """One-line human summary."""
        status = "ok" if self.passed else "FAIL " + ",".join(c.name for c in self.failures)
        return f"p={self.p} n={self.n} q={self.p**self.n} checks={len(self.checks)} {status}"

    def raise_for_failures(self) -> None:
        """Raise MismatchError naming the failed checks, if any."""
        if self.passed:
            return
        raise MismatchError(
            f"{len(self.failures)} of {len(self.checks)} checks failed",
            context={"p": self.p, "n": self.n, "checks": ",".join(c.name for c in self.failures)},
        )

    def to_result(self) -> dict[str, Any]:
        """Return the JSON result object."""
        return {
            "p": self.p,
            "n": self.n,
            "passed": self.passed,
            "checks": [check.model_dump() for check in self.checks],
        }


class OutputEnvelope(BaseModel):
    """Top-level JSON document written by the CLI."""

    schema_version: Literal["1"] = "1"
    command: str
    params: dict[str, int | str | None]
    result: Any
    timing_ms: int = Field(default=0, ge=0)

    def to_json(self) -> str:
        """Serialize with the declared key order."""
        return self.model_dump_json()
