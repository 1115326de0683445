"""Tests for the closed-form spectrum pipeline."""

import logging

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from pytest_mock import MockerFixture

from DiffSpectrum_Py import closedform
from DiffSpectrum_Py.closedform import (
    big_m,
    big_m_by_inclusion_exclusion,
    closed_spectrum,
    corollary_spectrum,
    differential_uniformity,
    eta_profile,
    eta_sqrt2_shift,
    m_from_moments,
    omega2,
    omega3,
    omega3_product_form,
    omega5,
    set_a_size,
    sqrt2_shift_by_root_test,
    t1,
    validate_pair,
)
from DiffSpectrum_Py.constants import CharSign, Method
from DiffSpectrum_Py.debug_mode import DebugLevel, set_component_debug
from DiffSpectrum_Py.exceptions import (
    BranchNotExhaustiveError,
    InvalidInputError,
    InvalidPrimeError,
    UnsupportedInputError,
)
from DiffSpectrum_Py.field import primes_between
from DiffSpectrum_Py.models import EtaProfile, Spectrum

KNOWN_SPECTRA = {
    (3, 2): (0, 9, 0, 0, 0, 0),
    (3, 3): (12, 3, 12, 0, 0, 0),
    (3, 4): (20, 55, 0, 0, 4, 2),
    (5, 2): (8, 11, 4, 2, 0, 0),
    (5, 4): (236, 209, 152, 2, 24, 2),
    (5, 5): (1180, 1045, 760, 0, 140, 0),
    (7, 1): (2, 3, 2, 0, 0, 0),
    (7, 2): (20, 17, 8, 0, 4, 0),
    (7, 4): (888, 801, 624, 0, 88, 0),
}

KNOWN_M = {(5, 4): 1182481, (5, 5): 29524925, (7, 4): 17056801}

PRIMES = primes_between(3, 400)


class TestValidation:
    """Test rejection of unsupported (p, n)."""

    def test_degenerate_pair(self) -> None:
        """Test (3, 1) gives d = 0 and is refused."""
        with pytest.raises(UnsupportedInputError, match="d = 0"):
            validate_pair(3, 1)

    def test_bad_inputs(self) -> None:
        """Test bad primes and degrees."""
        with pytest.raises(UnsupportedInputError):
            closed_spectrum(2, 8)
        with pytest.raises(InvalidPrimeError):
            closed_spectrum(9, 2)
        with pytest.raises(InvalidInputError, match="positive"):
            closed_spectrum(5, 0)


class TestCharacterProfile:
    """Test the sqrt(2) shift and the character profile."""

    def test_shift_undefined_without_sqrt2(self) -> None:
        """Test the shift is None when eta(2) = -1."""
        assert eta_sqrt2_shift(5, 3) is None
        assert sqrt2_shift_by_root_test(5, 3) is None
        assert eta_profile(5, 3).eta_sqrt2shift is None

    @pytest.mark.parametrize(("p", "n"), [(5, 2), (5, 4), (13, 2), (11, 6), (29, 4), (3, 8)])
    def test_shift_from_norm(self, p: int, n: int) -> None:
        """Test sqrt(2) outside F_p: eta(-7) = 1 or 4 | n gives +1."""
        residue = pow(-7 % p, (p - 1) // 2, p) == 1
        expected = CharSign.PLUS if residue or n % 4 == 0 else CharSign.MINUS
        assert eta_sqrt2_shift(p, n) == expected

    @pytest.mark.parametrize(("p", "n"), [(23, 1), (23, 2), (71, 1), (113, 3), (191, 1)])
    def test_conjugate_roots_agree(self, p: int, n: int) -> None:
        """Test both square roots of 2 give the same character when eta(-7) = 1."""
        assert eta_profile(p, n).etam7 == CharSign.PLUS
        assert eta_sqrt2_shift(p, n) == eta_sqrt2_shift(p, n, conjugate=True)

    @pytest.mark.parametrize(
        ("p", "n"), [(23, 1), (71, 1), (113, 1), (5, 4), (3, 4), (191, 2), (137, 13)]
    )
    def test_root_test_matches(self, p: int, n: int) -> None:
        """Test the quartic root test agrees where eta(-7) = 1."""
        assert eta_profile(p, n).etam7 == CharSign.PLUS
        assert sqrt2_shift_by_root_test(p, n) == eta_sqrt2_shift(p, n)

    def test_profile_is_multiplicative(self) -> None:
        """Test every profile satisfies the multiplicativity checks."""
        for p in PRIMES[:30]:
            for n in range(1, 9):
                prof = eta_profile(p, n)
                assert (prof.p, prof.n) == (p, n)


class TestCaseSplits:
    """Test T1, omega5, omega3 and omega2."""

    def test_t1_examples(self) -> None:
        """Test T1 for the supersingular prime and both shift values."""
        assert t1(7, 1) == 1
        assert t1(7, 2) == 3
        assert t1(5, 4) == 4
        assert t1(5, 2) == 0
        assert t1(5, 3) == 0

    def test_t1_exhaustive(self) -> None:
        """Test exactly one case fires for every small (p, n)."""
        for p in PRIMES:
            for n in range(1, 13):
                if (p, n) != (3, 1):
                    assert t1(p, n) in {0, 1, 2, 3, 4}

    def test_t1_overlapping_cases(self, mocker: MockerFixture) -> None:
        """Test a profile firing two cases is reported, not resolved silently."""
        profile = EtaProfile(
            p=7,
            n=1,
            eta2=CharSign.MINUS,
            etam7=CharSign.ZERO,
            etam1=CharSign.MINUS,
            etam3=CharSign.PLUS,
            eta6=CharSign.PLUS,
            etam2=CharSign.PLUS,
            eta_sqrt2shift=None,
        )
        mocker.patch("DiffSpectrum_Py.closedform.eta_profile", return_value=profile)
        with pytest.raises(BranchNotExhaustiveError, match="T1 case split"):
            t1(7, 1)

    def test_omega2_overlapping_cases(self, mocker: MockerFixture) -> None:
        """Test the p = 7 and C1 adjustments may not both apply."""
        profile = EtaProfile(
            p=7,
            n=1,
            eta2=CharSign.PLUS,
            etam7=CharSign.MINUS,
            etam1=CharSign.MINUS,
            etam3=CharSign.PLUS,
            eta6=CharSign.MINUS,
            etam2=CharSign.MINUS,
            eta_sqrt2shift=CharSign.PLUS,
        )
        mocker.patch("DiffSpectrum_Py.closedform.eta_profile", return_value=profile)
        with pytest.raises(BranchNotExhaustiveError, match="omega2 case split"):
            omega2(7, 1)

    def test_omega5_tracks_t1(self) -> None:
        """Test omega5 = 2 exactly when T1 = 4."""
        for p in PRIMES[:40]:
            for n in range(1, 9):
                if (p, n) != (3, 1):
                    assert (omega5(p, n) == 2) == (t1(p, n) == 4)

    def test_omega3_product_form(self) -> None:
        """Test the case split equals the character product."""
        for p in PRIMES:
            for n in range(1, 7):
                if (p, n) != (3, 1):
                    value = omega3(p, n)
                    assert value in {0, 2, 4}
                    assert value == omega3_product_form(p, n)

    def test_omega2_p3(self) -> None:
        """Test omega2 = (3^n - 3)/2 for odd n and 0 for even n."""
        assert omega2(3, 3) == 12
        assert omega2(3, 5) == 120
        assert omega2(3, 4) == 0

    def test_set_a_size(self) -> None:
        """Test |A| for reference fields."""
        assert set_a_size(5, 4) == 152
        assert set_a_size(3, 3) == 12
        assert set_a_size(3, 2) == 0
        assert set_a_size(7, 1) == 0


class TestBigM:
    """Test the quadruple count M."""

    @pytest.mark.parametrize(("pn", "value"), list(KNOWN_M.items()))
    def test_examples(self, pn: tuple[int, int], value: int) -> None:
        """Test M for reference fields."""
        assert big_m(*pn).value == value

    def test_inclusion_exclusion(self) -> None:
        """Test the interior/axis assembly reproduces M."""
        for p in PRIMES[:25]:
            for n in range(1, 6):
                if (p, n) != (3, 1):
                    assert big_m_by_inclusion_exclusion(p, n) == big_m(p, n).value

    def test_pn_spectrum_gives_minimum(self) -> None:
        """Test an all-ones spectrum gives M = 2q^2 - q."""
        q = 25
        assert m_from_moments(Spectrum(omega=(0, q)), q).value == 2 * q * q - q

    def test_identity_map_spectrum(self) -> None:
        """Test omega_0 = q - 1, omega_q = 1 gives M = q^3."""
        q = 9
        spectrum = Spectrum(omega=(q - 1,) + (0,) * (q - 1) + (1,))
        assert m_from_moments(spectrum, q).value == q**3


class TestClosedSpectrum:
    """Test the full pipeline."""

    @pytest.mark.parametrize(("pn", "omega"), list(KNOWN_SPECTRA.items()))
    def test_known_spectra(self, pn: tuple[int, int], omega: tuple[int, ...]) -> None:
        """Test spectra of reference fields."""
        report = closed_spectrum(*pn)
        assert report.spectrum.omega == omega
        assert report.method == Method.CLOSED
        assert report.d == pn[0] ** pn[1] - 3

    def test_report_fields(self) -> None:
        """Test intermediates are carried on the report."""
        report = closed_spectrum(5, 4)
        assert report.gamma == 14
        assert report.lambda1 == 13
        assert report.lambda2 == 13
        assert report.t1 == 4
        assert report.big_m.value == 1182481
        assert report.eta is not None and report.eta.eta_sqrt2shift == CharSign.PLUS
        assert (report.omega0, report.omega4, report.omega5) == (236, 24, 2)

    def test_p3_has_no_gamma(self) -> None:
        """Test Gamma is not applicable for p = 3."""
        assert closed_spectrum(3, 4).gamma is None

    def test_uniformity(self) -> None:
        """Test delta for reference fields."""
        assert differential_uniformity(5, 4) == 5
        assert differential_uniformity(7, 4) == 4
        assert differential_uniformity(3, 2) == 1
        assert differential_uniformity(3, 3) == 2

    def test_large_degree(self) -> None:
        """Test p = 997, n = 50 is exact and consistent."""
        report = closed_spectrum(997, 50)
        q = 997**50
        assert report.spectrum.order == q
        assert report.spectrum.moment(1) == q
        assert 1 <= report.spectrum.delta <= 5
        assert report.to_result()["M"] == str(report.big_m.value)

    @pytest.mark.property_based
    @given(st.sampled_from(PRIMES), st.integers(1, 24))
    @settings(max_examples=150)
    def test_moments(self, p: int, n: int) -> None:
        """Test sum omega_i = sum i omega_i = q and the second moment gives M."""
        if (p, n) == (3, 1):
            return
        report = closed_spectrum(p, n)
        q = p**n
        assert len(report.spectrum.omega) == 6
        assert report.spectrum.moment(0) == q
        assert report.spectrum.moment(1) == q
        assert (q - 1) * report.spectrum.moment(2) + q * q == report.big_m.value

    def test_logs_timing(self, caplog: pytest.LogCaptureFixture) -> None:
        """Test the closed-form component logs its timing at INFO."""
        set_component_debug("closedform", DebugLevel.DEBUG)
        with caplog.at_level(logging.DEBUG, logger="DiffSpectrum"):
            closed_spectrum(7, 2)
        assert "closed_spectrum completed" in caplog.text
        assert "Solved spectrum" in caplog.text


class TestCorollary:
    """Test the explicit p = 3, 5, 7 formulas."""

    @pytest.mark.parametrize("p", [3, 5, 7])
    def test_agrees_with_general_solver(self, p: int) -> None:
        """Test both paths for every n up to 40."""
        for n in range(1, 41):
            if (p, n) == (3, 1):
                continue
            corollary = corollary_spectrum(p, n)
            assert corollary.spectrum.omega == closed_spectrum(p, n).spectrum.omega, n
            assert corollary.method == Method.COROLLARY

    def test_examples(self) -> None:
        """Test the reference spectra through the explicit formulas."""
        for pn, omega in KNOWN_SPECTRA.items():
            assert corollary_spectrum(*pn).spectrum.omega == omega

    def test_characteristic_three_divisions_are_checked(self, mocker: MockerFixture) -> None:
        """Test the p = 3 formulas divide through exact_div."""
        spy = mocker.spy(closedform, "exact_div")
        corollary_spectrum(3, 4)
        spy.assert_any_call(81 - 33, 12, "omega4")
        spy.assert_any_call(2 * 81, 3, "omega1")

    def test_characteristic_three_large_n(self) -> None:
        """Test the p = 3 formulas stay exact and sum to q for large n."""
        for n in range(41, 121):
            omega = corollary_spectrum(3, n).spectrum.omega
            assert sum(omega) == 3**n, n

    def test_rejects_other_primes(self) -> None:
        """Test p = 11 has no explicit formula."""
        with pytest.raises(UnsupportedInputError, match="3, 5, 7"):
            corollary_spectrum(11, 2)
