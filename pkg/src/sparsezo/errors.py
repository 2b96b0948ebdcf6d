"""Exception types shared across the package."""


class SparsezoError(Exception):
    """Base class for package errors."""


class BudgetExhausted(SparsezoError):
    """Raised when a query would exceed the oracle's evaluation budget."""


class NonFinite(SparsezoError):
    """Raised when responses or intermediate values contain NaN or Inf."""


class InnerSolveFailed(SparsezoError):
    """Raised when the mirror-descent update cannot certify optimality."""


class InvalidConfig(SparsezoError):
    """Raised on malformed experiment configurations or parameters."""


class SchemaMismatch(SparsezoError):
    """Raised when result files do not share the expected column schema."""
