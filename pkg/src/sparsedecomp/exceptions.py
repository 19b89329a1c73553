#!/usr/bin/env python3
"""
Exceptions
Error hierarchy shared by the library, the CLI and the HTTP service.
"""


class SparseDecompError(Exception):
    """Base class for every error raised by sparsedecomp."""

    exit_code = 1

    def to_dict(self) -> dict[str, str]:
        return {"type": type(self).__name__, "message": str(self)}


class InputError(SparseDecompError, ValueError):
    """Malformed graph, vertex set, partition or parameter."""

    exit_code = 2


class PreconditionError(SparseDecompError):
    """A required hypothesis does not hold for the given input."""

    exit_code = 3

    def __init__(self, clause: str, message: str):
        super().__init__(f"{clause}: {message}")
        self.clause = clause

    def to_dict(self) -> dict[str, str]:
        data = super().to_dict()
        data["clause"] = self.clause
        return data


class ExactCapExceeded(SparseDecompError):
    """An exhaustive oracle was asked to run beyond its configured cap."""

    exit_code = 2


class NoWitnessError(SparseDecompError):
    """Pumping was requested for a partition pair that is already regular."""


class PumpingStalled(SparseDecompError):
    """Equalization would shrink clusters below the allowed minimum size."""


class RoundBudgetExceeded(SparseDecompError):
    """The regularization loop hit its hard round cap."""


class InvariantViolation(SparseDecompError):
    """A conclusion that is guaranteed inside its regime failed."""
