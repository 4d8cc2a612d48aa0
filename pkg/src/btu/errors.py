"""Exception types shared across the package.

The CLI maps these onto exit codes: usage problems exit 2, oracle guard
refusals exit 3 and invariant violations exit 4.
"""


class DomainError(ValueError):
    """An argument lies outside the domain of an operation."""


class GuardRefusal(RuntimeError):
    """A brute-force routine refused an instance above its size guard."""


class InvariantViolation(AssertionError):
    """An internal consistency check failed."""
