"""
Exception hierarchy for kernelwalk.

Every error raised by the library derives from KernelWalkError so the CLI
can map it to an exit code: input errors exit 1, numeric failures exit 2.
"""

from typing import Optional


class KernelWalkError(Exception):
    """Base class for all kernelwalk errors."""

    exit_code: int = 1

    def __init__(self, module: str, message: str):
        self.module = module
        self.message = message
        super().__init__(f"{module}: {message}")


class ModelError(KernelWalkError, ValueError):
    """Invalid model file or model values."""

    def __init__(self, message: str, line: Optional[int] = None, column: Optional[int] = None):
        self.line = line
        self.column = column
        if line is not None:
            where = f"line {line}" + (f", column {column}" if column is not None else "")
            message = f"{message} ({where})"
        super().__init__("model", message)


class ConfigError(KernelWalkError, ValueError):
    """Invalid configuration value or environment override."""

    def __init__(self, message: str):
        super().__init__("config", message)


class DegenerateModelError(KernelWalkError, ValueError):
    """Curve machinery requested on a degenerate or non-elliptic model."""


class NumericError(KernelWalkError, RuntimeError):
    """Numeric procedure failed to meet its tolerance."""

    exit_code = 2


class PoleProximityError(NumericError):
    """Evaluation point too close to a pole."""


class GroupInconsistencyError(NumericError):
    """Lattice check and orbit check disagree on the order of sigma."""
