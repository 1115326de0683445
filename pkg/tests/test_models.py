"""Tests for data models."""

import json

import pytest
from pydantic import ValidationError

from DiffSpectrum_Py.constants import CharSign, CharSumKind, Method
from DiffSpectrum_Py.exceptions import MismatchError
from DiffSpectrum_Py.models import (
    CharSumValue,
    EtaProfile,
    GammaParams,
    OutputEnvelope,
    QuadrupleCountM,
    Spectrum,
    SpectrumReport,
    VerificationCheck,
    VerificationReport,
    as_decimal,
)

# eta over F_5 of the constants used by the case splits
ETA_F5: dict[str, CharSign | None] = {
    "eta2": CharSign.MINUS,
    "etam7": CharSign.MINUS,
    "etam1": CharSign.PLUS,
    "etam3": CharSign.MINUS,
    "eta6": CharSign.PLUS,
    "etam2": CharSign.MINUS,
    "eta_sqrt2shift": None,
}


class TestSpectrum:
    """Test Spectrum model."""

    def test_properties(self) -> None:
        """Test order, delta and moments."""
        spectrum = Spectrum(omega=(236, 209, 152, 2, 24, 2))
        assert spectrum.order == 625
        assert spectrum.delta == 5
        assert spectrum.moment(0) == spectrum.moment(1) == 625

    def test_delta_ignores_trailing_zeros(self) -> None:
        """Test delta comes from contents, not length."""
        assert Spectrum(omega=(2, 3, 2, 0, 0, 0)).delta == 2

    @pytest.mark.parametrize("omega", [(), (1, -1, 1), (1, 1)])
    def test_rejects_invalid(self, omega: tuple[int, ...]) -> None:
        """Test empty, negative and unbalanced vectors."""
        with pytest.raises(ValidationError):
            Spectrum(omega=omega)

    def test_padding(self) -> None:
        """Test padding and zero reads past the end."""
        spectrum = Spectrum(omega=(2, 3, 2))
        assert spectrum.padded(6).omega == (2, 3, 2, 0, 0, 0)
        assert spectrum.padded(2) is spectrum
        assert spectrum.omega_at(5) == 0

    def test_same_as(self) -> None:
        """Test comparison ignores trailing zeros."""
        assert Spectrum(omega=(2, 3, 2)).same_as(Spectrum(omega=(2, 3, 2, 0, 0, 0)))
        assert not Spectrum(omega=(2, 3, 2)).same_as(Spectrum(omega=(3, 1, 3)))


class TestScalarModels:
    """Test the small validated values."""

    def test_gamma_params(self) -> None:
        """Test the trace and Hasse bound."""
        assert GammaParams(p=5, n_points=7, a=2).a == 2
        with pytest.raises(ValidationError, match="differs"):
            GammaParams(p=5, n_points=7, a=3)
        with pytest.raises(ValidationError, match="a\\^2 < 4p"):
            GammaParams(p=5, n_points=10, a=5)

    def test_char_sum_weil_bound(self) -> None:
        """Test |value| <= 2 q^(1/2) + 2."""
        assert CharSumValue(value=12, which=CharSumKind.LAMBDA1, p=5, n=2).value == 12
        with pytest.raises(ValidationError, match="Weil"):
            CharSumValue(value=13, which=CharSumKind.LAMBDA1, p=5, n=2)

    def test_big_m_congruence(self) -> None:
        """Test M = 1 mod q - 1."""
        assert QuadrupleCountM(value=115, order=7).value == 115
        with pytest.raises(ValidationError, match="not 1 mod"):
            QuadrupleCountM(value=114, order=7)

    def test_as_decimal(self) -> None:
        """Test big integers become strings and None passes through."""
        assert as_decimal(-(10**30)) == "-" + "1" + "0" * 30
        assert as_decimal(None) is None


class TestEtaProfile:
    """Test EtaProfile consistency checks."""

    def test_consistent(self) -> None:
        """Test the F_5 profile validates."""
        assert EtaProfile(p=5, n=1, **ETA_F5).eta6 == CharSign.PLUS

    def test_multiplicativity(self) -> None:
        """Test eta(6) must equal eta(-2) eta(-3)."""
        with pytest.raises(ValidationError, match="eta\\(6\\)"):
            EtaProfile(p=5, n=1, **{**ETA_F5, "eta6": CharSign.MINUS})

    def test_shift_applicability(self) -> None:
        """Test the shift value exists exactly when eta(2) = 1."""
        with pytest.raises(ValidationError, match="exactly when"):
            EtaProfile(p=5, n=1, **{**ETA_F5, "eta_sqrt2shift": CharSign.PLUS})

    def test_zero_values_skip_products(self) -> None:
        """Test eta = 0 entries do not trigger the product checks."""
        profile = EtaProfile(
            p=3, n=1, **{**ETA_F5, "etam3": CharSign.ZERO, "eta6": CharSign.ZERO}
        )
        assert profile.etam3 == CharSign.ZERO


class TestSpectrumReport:
    """Test SpectrumReport moment checks and serialization."""

    def make(self, big_m: int = 115) -> SpectrumReport:
        return SpectrumReport(
            p=7,
            n=1,
            d=4,
            method=Method.BRUTE,
            spectrum=Spectrum(omega=(2, 3, 2)),
            big_m=QuadrupleCountM(value=big_m, order=7),
            modulus=(0, 1),
        )

    def test_second_moment(self) -> None:
        """Test (q - 1) sum i^2 omega_i = M - q^2."""
        report = self.make()
        assert (report.omega0, report.omega2, report.omega5) == (2, 2, 0)
        with pytest.raises(ValidationError, match="second moment"):
            self.make(big_m=121)

    def test_wrong_field_size(self) -> None:
        """Test the spectrum must sum to q."""
        with pytest.raises(ValidationError, match="sums to"):
            SpectrumReport(
                p=5,
                n=1,
                d=2,
                method=Method.BRUTE,
                spectrum=Spectrum(omega=(2, 3, 2)),
                big_m=QuadrupleCountM(value=5, order=5),
            )

    def test_result_keys(self) -> None:
        """Test the result object key order and the brute-only nulls."""
        result = self.make().to_result()
        assert list(result)[:4] == ["method", "d", "gamma", "lambda1"]
        assert result["gamma"] is None
        assert result["M"] == "115"
        assert result["spectrum"] == ["2", "3", "2"]
        assert result["modulus"] == [0, 1]

    def test_require_same(self) -> None:
        """Test agreement passes and a different spectrum raises MismatchError."""
        report = self.make()
        report.require_same(report.model_copy(update={"method": Method.CLOSED}))
        other = report.model_copy(
            update={"method": Method.CLOSED, "spectrum": Spectrum(omega=(3, 1, 3))}
        )
        with pytest.raises(MismatchError, match="brute and closed spectra differ") as info:
            report.require_same(other)
        assert info.value.context["closed"] == [3, 1, 3]

    def test_require_same_field(self) -> None:
        """Test reports for different fields never agree."""
        report = self.make()
        with pytest.raises(MismatchError):
            report.require_same(report.model_copy(update={"p": 5}))


class TestEnvelope:
    """Test the CLI output envelope."""

    def test_to_json(self) -> None:
        """Test key order and the schema version."""
        envelope = OutputEnvelope(command="gamma", params={"p": 7, "n": 3}, result={"gamma": "0"})
        doc = json.loads(envelope.to_json())
        assert list(doc) == ["schema_version", "command", "params", "result", "timing_ms"]
        assert doc["schema_version"] == "1"
        assert doc["timing_ms"] == 0

    def test_negative_timing(self) -> None:
        """Test timing cannot be negative."""
        with pytest.raises(ValidationError):
            OutputEnvelope(command="gamma", params={}, result=None, timing_ms=-1)

    def test_verification_report(self) -> None:
        """Test the summary of a report with one failure."""
        report = VerificationReport(
            p=5,
            n=2,
            checks=(
                VerificationCheck(name="spectrum", passed=True, expected="a", actual="a"),
                VerificationCheck(name="t1", passed=False, expected="0", actual="1"),
            ),
        )
        assert not report.passed
        assert report.summary_line() == "p=5 n=2 q=25 checks=2 FAIL t1"
        with pytest.raises(MismatchError, match="1 of 2 checks failed") as info:
            report.raise_for_failures()
        assert info.value.context["checks"] == "t1"

    def test_passing_report_does_not_raise(self) -> None:
        """Test raise_for_failures is silent when every check passed."""
        check = VerificationCheck(name="gamma", passed=True, expected="6", actual="6")
        VerificationReport(p=5, n=2, checks=(check,)).raise_for_failures()
