"""Exception hierarchy and resource guards."""

from __future__ import annotations

import os


class HDAError(Exception):
    """Base class for all errors raised by hdasem."""

    kind = "error"

    def to_json(self) -> dict:
        return {"error": self.kind, "message": str(self)}


class AlgebraError(HDAError, ValueError):
    kind = "algebra"


class UnknownLabelError(AlgebraError, KeyError):
    kind = "unknown-label"

    def __str__(self) -> str:  # KeyError quotes its argument otherwise
        return str(self.args[0]) if self.args else ""


class ResourceLimitError(HDAError, RuntimeError):
    kind = "resource-limit"


class PCSetError(HDAError, ValueError):
    kind = "pcset"


class CycleError(PCSetError):
    kind = "cycle"


DEFAULT_GUARDS = {
    "states": 10**6,
    "iso_cubes": 10**4,
    "paths": 10**6,
    "cubes": 10**6,
    "matrix": 4 * 10**6,
}


def guard(name: str) -> int:
    """Return the limit for resource *name*; ``HDA_SEM_GUARD`` overrides every limit."""
    override = os.environ.get("HDA_SEM_GUARD")
    if override:
        return int(override)
    return DEFAULT_GUARDS[name]


def check_guard(name: str, value: int) -> None:
    limit = guard(name)
    if value > limit:
        raise ResourceLimitError(f"{name} guard exceeded: {value} > {limit}")
