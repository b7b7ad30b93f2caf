class InputError(ValueError):
    """Malformed or inconsistent user input (bad graph, bad coloring, shape mismatch)."""


class BudgetError(RuntimeError):
    """Requested computation exceeds a configured enumeration budget."""


class InconsistentSigmaError(ValueError):
    """Covariance inputs produce a matrix that is not positive semidefinite beyond round-off."""
