from __future__ import annotations

from typing import Any


class OpcoactError(Exception):
    """Base class for every error raised by opcoact."""


class InputError(OpcoactError, ValueError):
    """Malformed input: unreadable files, unknown presets, mismatched sizes."""


class RingModeError(InputError):
    """Plain and graded polynomials were mixed, or graded data reached a plain-only operation."""


class AxiomError(OpcoactError):
    """An algebra failed its axiom check where a P-algebra was required.

    Attributes:
        report (Any): The failing axiom report.
    """

    def __init__(self, message: str, report: Any = None) -> None:
        super().__init__(message)
        self.report = report


class BudgetExceeded(OpcoactError, RuntimeError):
    """A Gröbner computation hit its configured basis-size or reduction-step cap."""
