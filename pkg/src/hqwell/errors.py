"""Exception types shared across the package."""


class UsageError(ValueError):
    """Invalid arguments or a violated precondition."""


class UnsupportedBoundary(UsageError):
    """A boundary condition that only admits the trivial solution."""


class NumericFailure(ArithmeticError):
    """A computation produced non-finite values or failed to converge."""
