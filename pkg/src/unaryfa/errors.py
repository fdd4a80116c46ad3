"""Exception types raised by the library and mapped to CLI exit codes."""


class UnaryError(Exception):
    """Base class for every error raised by unaryfa."""


class GuardExceeded(UnaryError):
    """A size guard (lcm, window, cycle length) was exceeded."""


class AmbiguousInput(UnaryError):
    """An operation that requires a UFA received an ambiguous automaton."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class RecursionOverflow(UnaryError):
    """Complement recursion went deeper than its proven bound (a bug trap)."""


class StructureViolation(UnaryError):
    """Residue-uniqueness precondition of the structured intersection failed."""


class NotThreeOccur(UnaryError):
    """A generator needs every variable to occur at most three times."""


class ConcatDisallowed(UnaryError):
    """Formula uses concatenation without the explicit allow flag."""


class Inexact(UnaryError):
    """An oracle trajectory did not close within its iteration cap."""


class TooLarge(UnaryError):
    """Brute-force search refused an instance above its size limit."""


class NoPeriodInWindow(UnaryError):
    """No period fits twice in the supplied window."""


class FormatError(UnaryError):
    """Malformed UAF, DIMACS or formula text."""
