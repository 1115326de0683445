"""Runtime configuration.

Caps and worker counts come from the environment (``BRUTE_CAP``, ``WORKERS``,
``QUADRUPLE_CAP``) and can be overridden per invocation by CLI flags.

Examples:
    Reading the environment and overriding one value::

        config = RuntimeConfig.from_env().with_overrides(workers=1)
"""

import os
from collections.abc import Mapping

import psutil
from pydantic import BaseModel, ConfigDict, Field, ValidationError

from DiffSpectrum_Py.constants import FieldLimits, TableConstants
from DiffSpectrum_Py.exceptions import InvalidInputError

ENV_KEYS: dict[str, str] = {
    "brute_cap": "BRUTE_CAP",
    "workers": "WORKERS",
    "quadruple_cap": "QUADRUPLE_CAP",
}


def default_workers() -> int:
    """Return the number of logical CPUs, at least 1."""
    return psutil.cpu_count(logical=True) or 1


class RuntimeConfig(BaseModel):
    """Limits and parallelism for oracle runs.

    Attributes:
        brute_cap: Largest p^n for which F_{p^n} is built explicitly.
        workers: Number of oracle worker threads.
        quadruple_cap: Largest p^n for the O(q^2) quadruple enumeration.
        prime_cap: Exclusive bound on p for the closed-form path.
        memory_fraction: Share of available memory the oracle tables may use.
    """

    model_config = ConfigDict(frozen=True)

    brute_cap: int = Field(default=FieldLimits.BRUTE_CAP, ge=1)
    workers: int = Field(default_factory=default_workers, ge=1)
    quadruple_cap: int = Field(default=FieldLimits.QUADRUPLE_CAP, ge=1)
    prime_cap: int = Field(default=FieldLimits.PRIME_CAP, ge=FieldLimits.SMALLEST_PRIME + 1)
    memory_fraction: float = Field(default=TableConstants.MEMORY_FRACTION, gt=0.0, le=1.0)

    @classmethod
    def from_env(cls, environ: Mapping[str, str] | None = None) -> "RuntimeConfig":
        """Build a configuration from environment variables.

        Args:
            environ: Mapping to read instead of ``os.environ``.

        Returns:
            RuntimeConfig with defaults for unset keys.

        Raises:
            InvalidInputError: If a set variable is not a valid value.
        """
        source = os.environ if environ is None else environ
        values: dict[str, str] = {
            field: source[key] for field, key in ENV_KEYS.items() if source.get(key, "").strip()
        }
        try:
            return cls.model_validate(values)
        except ValidationError as e:
            bad = ",".join(ENV_KEYS[str(err["loc"][0])] for err in e.errors() if err["loc"])
            raise InvalidInputError(
                "Invalid environment configuration", context={"keys": bad}
            ) from e

    def with_overrides(self, **overrides: int | float | None) -> "RuntimeConfig":
        """Return a copy with every non-None override applied.

        Args:
            **overrides: Field values, typically taken from CLI flags.

        Returns:
            New validated RuntimeConfig.

        Raises:
            InvalidInputError: If an override is out of range.
        """
        updates = {k: v for k, v in overrides.items() if v is not None}
        if not updates:
            return self
        try:
            return type(self).model_validate({**self.model_dump(), **updates})
        except ValidationError as e:
            raise InvalidInputError(
                "Invalid configuration override", context={"fields": ",".join(updates)}
            ) from e
