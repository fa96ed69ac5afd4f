"""Exception types shared across the package."""


class HindsightError(Exception):
    """Base class for package errors."""


class FeedFormatError(HindsightError):
    """A feed file or record is malformed (bad header, bad field, bad line)."""

    def __init__(self, message, line_no=None):
        if line_no is not None:
            message = f"line {line_no}: {message}"
        super().__init__(message)
        self.line_no = line_no


class FeedIntegrityError(HindsightError):
    """A syntactically valid feed violates stream invariants (timestamp
    regression, dangling order reference, over-reduction, crossed book)."""

    def __init__(self, message, line_no=None):
        if line_no is not None:
            message = f"line {line_no}: {message}"
        super().__init__(message)
        self.line_no = line_no


class InsufficientDepthError(HindsightError):
    """A sweep asked for more shares than the book holds on that side."""

    def __init__(self, requested, max_feasible):
        super().__init__(
            f"sweep of {requested} shares exceeds available depth; "
            f"maximum feasible volume is {max_feasible}"
        )
        self.requested = requested
        self.max_feasible = max_feasible


class FitError(HindsightError):
    """Power-law fitting is impossible on the given points."""
