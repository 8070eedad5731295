"""Exception hierarchy shared by every gkstab module."""


class GKStabError(Exception):
    """Base class for all errors raised by gkstab."""


class UnsupportedType(GKStabError, ValueError):
    pass


class DimensionMismatch(GKStabError, ValueError):
    pass


class VariableMismatch(GKStabError, ValueError):
    pass


class NotComparable(GKStabError, ValueError):
    """Requested a Kazhdan-Lusztig polynomial for y not below w."""


class IncompleteCache(GKStabError, LookupError):
    pass


class InvalidCosetRepresentative(GKStabError, ValueError):
    pass


class StratumViolation(GKStabError, ValueError):
    """A class involves simples whose GK dimension exceeds the stratum."""


class ZeroClass(GKStabError, ValueError):
    pass


class NotDominant(GKStabError, ValueError):
    pass


class FitFailure(GKStabError, ArithmeticError):
    """Quasi-polynomial branches disagree in degree or leading coefficient."""


class OnWall(GKStabError, ValueError):
    def __init__(self, message, coroot=None):
        super().__init__(message)
        self.coroot = coroot


class ZeroCharge(GKStabError, ValueError):
    pass


class VerificationFailure(GKStabError, AssertionError):
    """A verification check failed; ``witness`` holds a serializable counterexample."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class ScanParseError(GKStabError, ValueError):
    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class InsufficientDepth(GKStabError, ValueError):
    """Too few Hilbert-series layers to fit the quasi-polynomial reliably."""
