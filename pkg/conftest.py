"""pytest configuration for the differential spectrum package.

This file provides shared fixtures and configuration for the test suite.
"""

from collections.abc import Generator

import pytest
from hypothesis import HealthCheck, settings

from DiffSpectrum_Py.charsum import gamma_params
from DiffSpectrum_Py.closedform import eta_profile
from DiffSpectrum_Py.config import RuntimeConfig
from DiffSpectrum_Py.debug_mode import debug_mode, disable_debug
from DiffSpectrum_Py.field import FieldCtx, FieldTables, build_tables, find_irreducible
from DiffSpectrum_Py.oracle import get_oracle

# Small limits keep every brute-force test well under a second
TEST_BRUTE_CAP = 3**10
TEST_WORKERS = 2

settings.register_profile(
    "diffspectrum",
    deadline=None,
    suppress_health_check=[HealthCheck.function_scoped_fixture],
)
settings.load_profile("diffspectrum")


@pytest.fixture(autouse=True)
def reset_debug_state() -> Generator[None, None, None]:
    """Start and finish every test with logging off and no component overrides."""
    disable_debug()
    debug_mode._component_levels.clear()  # pyright: ignore[reportPrivateUsage]
    yield
    disable_debug()
    debug_mode._component_levels.clear()  # pyright: ignore[reportPrivateUsage]


@pytest.fixture(autouse=True)
def clear_caches() -> Generator[None, None, None]:
    """Drop memoized tables and oracles so tests stay independent under xdist."""
    yield
    build_tables.cache_clear()
    get_oracle.cache_clear()
    gamma_params.cache_clear()
    eta_profile.cache_clear()
    find_irreducible.cache_clear()


@pytest.fixture(autouse=True)
def clean_environment(monkeypatch: pytest.MonkeyPatch) -> None:
    """Remove configuration variables the host shell may have set."""
    for key in ("BRUTE_CAP", "WORKERS", "QUADRUPLE_CAP"):
        monkeypatch.delenv(key, raising=False)


def pytest_configure(config: pytest.Config) -> None:
    """Configure custom pytest markers."""
    config.addinivalue_line(
        "markers", "slow: marks tests as slow (deselect with '-m \"not slow\"')"
    )
    config.addinivalue_line("markers", "integration: marks integration tests")
    config.addinivalue_line("markers", "performance: marks performance benchmarks")
    config.addinivalue_line("markers", "property_based: marks hypothesis property tests")
    config.addinivalue_line("markers", "unit: marks unit tests")


# =============================================================================
# SHARED TEST FIXTURES
# =============================================================================


@pytest.fixture
def small_config() -> RuntimeConfig:
    """Runtime limits sized for the test suite."""
    return RuntimeConfig(brute_cap=TEST_BRUTE_CAP, workers=TEST_WORKERS)


@pytest.fixture
def ctx_9() -> FieldCtx:
    """F_9 built on x^2 + 1."""
    return FieldCtx.build(3, 2)


@pytest.fixture
def ctx_25() -> FieldCtx:
    """F_25 built on x^2 + 2."""
    return FieldCtx.build(5, 2)


@pytest.fixture
def ctx_27() -> FieldCtx:
    """F_27."""
    return FieldCtx.build(3, 3)


@pytest.fixture
def ctx_49() -> FieldCtx:
    """F_49."""
    return FieldCtx.build(7, 2)


@pytest.fixture
def ctx_625() -> FieldCtx:
    """F_625."""
    return FieldCtx.build(5, 4)


@pytest.fixture
def tables_25(ctx_25: FieldCtx) -> FieldTables:
    """Exp/log tables of F_25."""
    return build_tables(ctx_25)


# =============================================================================
# AUTOMATIC MARKERS
# =============================================================================


def pytest_collection_modifyitems(config: pytest.Config, items: list[pytest.Item]) -> None:
    """Mark performance and sweep tests as slow by file and name."""
    slow_patterns = ["test_large_", "test_sweep_", "test_full_"]
    for item in items:
        test_file = str(item.fspath)
        if "test_performance" in test_file:
            item.add_marker(pytest.mark.performance)
            item.add_marker(pytest.mark.slow)
        if any(pattern in item.name for pattern in slow_patterns):
            item.add_marker(pytest.mark.slow)
