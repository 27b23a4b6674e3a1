"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument violates an operation's precondition (degree, shape, range)."""


class ConsistencyError(RuntimeError):
    """An internal cross-check failed; points at a sign/stencil/convention bug."""


class IdentityViolationError(ConsistencyError):
    """A machine-exact pairing identity failed beyond tolerance.

    Carries both evaluations so the report can show what disagreed.
    """

    def __init__(self, message: str, left: float, right: float):
        super().__init__(message)
        self.left = left
        self.right = right


class DegenerateBasisError(RuntimeError):
    """Every orbit generator was pruned as null; names the pruned set."""

    def __init__(self, message: str, pruned: list):
        super().__init__(message)
        self.pruned = pruned


class ConditioningError(RuntimeError):
    """A Gram/linear system is too ill conditioned to solve reliably."""


class EigensolverError(RuntimeError):
    """The dense Hermitian eigensolver failed; carries diagnostics."""


class ConfigError(ValueError):
    """A run configuration file or CLI argument could not be validated."""
