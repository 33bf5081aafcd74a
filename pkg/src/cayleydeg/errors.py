"""Shared exception types.

Input and precondition problems raise ValueError (or the BudgetExceeded
subclass when a configured cap is the reason).  InvariantBreach marks a
condition that the underlying mathematics guarantees can never happen;
reaching one means the library itself is wrong, and the CLI turns it into
its own exit code.
"""

from __future__ import annotations

__all__ = ["BudgetExceeded", "InvariantBreach"]


class BudgetExceeded(ValueError):
    """A configured enumeration or size budget was exceeded."""


class InvariantBreach(RuntimeError):
    """A mathematically guaranteed invariant failed; this is a library bug."""
