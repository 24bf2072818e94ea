"""Exception types raised by the hfq package."""


class HFQError(Exception):
    """Base class for all package errors."""


class DiagramParseError(HFQError):
    """A diagram or covering-spec file could not be decoded."""


class InvalidParameters(HFQError, ValueError):
    """Constructor or oracle called with unsupported integer parameters."""


class LimitExceeded(HFQError):
    """Generator enumeration hit its limit before exhausting the set."""


class NotOnePointed(HFQError):
    pass


class BadIndex(HFQError, IndexError):
    pass


class DifferentSpincClass(HFQError):
    """The two generators do not lie in the same Spin^c class."""


class NonTorsionClass(HFQError):
    """A generator's Spin^c class has non-torsion first Chern class."""


class InfiniteOrder(HFQError):
    """The difference of two Spin^c classes has infinite order."""


class DisconnectedCover(HFQError):
    pass


class InvalidCocycle(HFQError):
    pass


class SearchFailed(HFQError):
    """No trivializing cocycle was found; indicates a defect, not bad input."""
