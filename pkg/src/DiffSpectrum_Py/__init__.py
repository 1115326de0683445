"""Differential spectrum of the power map x^(p^n - 3) over F_{p^n}.

Closed-form spectra from a single elliptic-curve point count, checked against
a brute-force differential oracle on small fields.

Basic Usage:
    >>> from DiffSpectrum_Py import closed_spectrum, gamma
    >>>
    >>> report = closed_spectrum(5, 4)
    >>> report.spectrum.omega
    (236, 209, 152, 2, 24, 2)
    >>> gamma(5, 2)
    6

Cross-checking:
    >>> from DiffSpectrum_Py import verify_field
    >>> verify_field(7, 2).passed
    True

Command line:
    $ diffspectrum spectrum --p 5 --n 4 --method both
"""  # noqa: N999

from DiffSpectrum_Py.charsum import charsum, count_ec_points, gamma, lambda1, lambda2
from DiffSpectrum_Py.closedform import (
    big_m,
    closed_spectrum,
    corollary_spectrum,
    differential_uniformity,
    omega2,
    omega3,
    omega5,
    t1,
)
from DiffSpectrum_Py.config import RuntimeConfig
from DiffSpectrum_Py.debug_mode import (
    DebugLevel,
    disable_debug,
    enable_debug,
    set_component_debug,
)
from DiffSpectrum_Py.exceptions import (
    CapExceededError,
    DiffSpectrumError,
    InternalConsistencyError,
    InvalidInputError,
    InvalidPrimeError,
    MismatchError,
    NonResidueError,
    UnsupportedInputError,
    ZeroArgumentError,
)
from DiffSpectrum_Py.field import FieldCtx, FieldElement, find_irreducible, legendre, sqrt_mod_p
from DiffSpectrum_Py.models import Spectrum, SpectrumReport, VerificationReport
from DiffSpectrum_Py.oracle import (
    DifferentialOracle,
    brute_spectrum,
    count_nb,
    count_quadruples,
    count_set_a,
)
from DiffSpectrum_Py.verification import sweep, verify_field

__version__ = "0.3.0"
__all__ = [
    "CapExceededError",
    "DebugLevel",
    "DiffSpectrumError",
    "DifferentialOracle",
    "FieldCtx",
    "FieldElement",
    "InternalConsistencyError",
    "InvalidInputError",
    "InvalidPrimeError",
    "MismatchError",
    "NonResidueError",
    "RuntimeConfig",
    "Spectrum",
    "SpectrumReport",
    "UnsupportedInputError",
    "VerificationReport",
    "ZeroArgumentError",
    "big_m",
    "brute_spectrum",
    "charsum",
    "closed_spectrum",
    "corollary_spectrum",
    "count_ec_points",
    "count_nb",
    "count_quadruples",
    "count_set_a",
    "differential_uniformity",
    "disable_debug",
    "enable_debug",
    "find_irreducible",
    "gamma",
    "lambda1",
    "lambda2",
    "legendre",
    "omega2",
    "omega3",
    "omega5",
    "set_component_debug",
    "sqrt_mod_p",
    "sweep",
    "t1",
    "verify_field",
]
