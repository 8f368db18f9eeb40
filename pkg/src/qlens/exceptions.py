"""Exception hierarchy for qlens.

All exceptions raised by the public API inherit from :class:`QlensError`,
allowing callers to catch library errors selectively::

    try:
        result = compute_ktheory(3, 12)
    except QlensError as exc:
        ...  # any qlens error
"""


class QlensError(Exception):
    """Base exception for all qlens errors."""


class ConfigError(QlensError):
    """Raised when ``[tool.qlens]`` configuration is invalid.

    Attributes:
        detail: Human-readable description of the validation failure.
    """

    def __init__(self, detail: str) -> None:
        self.detail = detail
        super().__init__(detail)


class RewriteBudgetExceeded(QlensError, RuntimeError):
    """Raised when a normal-form computation runs past its rewrite budget.

    Attributes:
        budget: The configured maximum number of rule applications.
        steps: Rule applications performed when the limit was hit.
    """

    def __init__(self, budget: int, steps: int) -> None:
        self.budget = budget
        self.steps = steps
        super().__init__(
            f"Rewrite budget of {budget} rule applications exceeded "
            f"({steps} applied). Raise --rewrite-budget or shrink the check."
        )


class UnsupportedIdentityError(QlensError):
    """Raised when an expression needs an unpaired square-root coefficient.

    Attributes:
        detail: Which terms could not be combined.
    """

    def __init__(self, detail: str) -> None:
        self.detail = detail
        super().__init__(f"Unsupported identity: {detail}")


class PreconditionError(QlensError, ValueError):
    """Raised when an operation is called outside its domain.

    Attributes:
        operation: Name of the rejected operation.
        detail: The violated condition.
    """

    def __init__(self, operation: str, detail: str) -> None:
        self.operation = operation
        self.detail = detail
        super().__init__(f"{operation}: {detail}")


class DimensionMismatchError(QlensError, ValueError):
    """Raised when shapes or ambient dimensions of operands disagree.

    Attributes:
        expected: The dimension that was required.
        actual: The dimension that was supplied.
    """

    def __init__(self, expected: object, actual: object, what: str = "") -> None:
        self.expected = expected
        self.actual = actual
        prefix = f"{what}: " if what else ""
        super().__init__(f"{prefix}expected {expected}, got {actual}")


class ClaimError(QlensError, ValueError):
    """Raised when a generator claim is malformed.

    Attributes:
        claim: The offending claim text or expression.
        detail: Why it was rejected.
    """

    def __init__(self, claim: str, detail: str) -> None:
        self.claim = claim
        self.detail = detail
        super().__init__(f"Invalid claim '{claim}': {detail}")


class InvariantViolation(QlensError, ArithmeticError):
    """Raised when an internal exactness check fails.

    This always indicates a bug: an inexact Laurent division, a Smith normal
    form certificate that does not multiply out, or a non-unimodular
    transform.

    Attributes:
        detail: Which check failed.
    """

    def __init__(self, detail: str) -> None:
        self.detail = detail
        super().__init__(f"Internal invariant violated: {detail}")
