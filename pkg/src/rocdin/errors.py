"""Exception and warning types raised across the package."""


class RocdinError(Exception):
    """Base class for all package errors."""


class DomainError(RocdinError, ValueError):
    """An argument lies outside the domain of the operation."""


class UsageError(RocdinError, TypeError):
    """An operation was applied to the wrong kind of object."""


class ZeroDenominator(RocdinError, ZeroDivisionError):
    """Likelihood ratio is infinite: f0(t) = 0 while f1(t) > 0."""

    def __init__(self, t):
        super().__init__(f"f0({t!r}) = 0 while f1({t!r}) > 0; likelihood ratio is infinite")
        self.t = t


class NonFiniteIntegrand(RocdinError, ArithmeticError):
    """The integrand returned inf/nan strictly inside the working interval."""

    def __init__(self, x, value):
        super().__init__(f"integrand is non-finite at x={x!r} (value {value!r})")
        self.x = x
        self.value = value


class DisagreementError(RocdinError, ArithmeticError):
    """Two independent computation paths for the same quantity disagree."""


class Unsupported(RocdinError, NotImplementedError):
    """The operation is not defined for this curve kind."""


class ParseError(RocdinError, ValueError):
    """Malformed textual input (distribution specs, score files)."""


class MalformedRow(ParseError):
    def __init__(self, line_no, detail=""):
        msg = f"line {line_no}: malformed row"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)
        self.line_no = line_no


class UnknownLabel(ParseError):
    def __init__(self, line_no, label):
        super().__init__(f"line {line_no}: unknown label {label!r} (expected N or D)")
        self.line_no = line_no
        self.label = label


class EmptyClass(RocdinError, ValueError):
    """One of the two classes has no observations."""


class TooFewPoints(RocdinError, ValueError):
    """Not enough (or degenerate) data to build a density estimate."""


class NonConvergenceWarning(RuntimeWarning):
    """Adaptive quadrature stopped before reaching the requested tolerance."""
