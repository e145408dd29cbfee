"""Exception hierarchy shared by every module of the package."""


class SheafBNError(Exception):
    """Base class for all errors raised by sheafbn."""


class InputError(SheafBNError, ValueError):
    """Malformed or inconsistent input data."""


class DegreeOutOfRange(InputError):
    pass


class DegreeNegative(InputError):
    pass


class NotAComplex(InputError):
    pass


class RingMismatch(InputError):
    pass


class EmptyInput(InputError):
    pass


class InvalidVertexIndex(InputError):
    pass


class NotConnected(InputError):
    pass


class NotAnEdge(InputError):
    pass


class BasepointMismatch(InputError):
    pass


class IncompleteTable(InputError):
    pass


class PresentationMismatch(InputError):
    pass


class NotRegularCover(InputError):
    pass


class BaseMismatch(InputError):
    pass


class TotalMismatch(InputError):
    pass


class InvalidSheaf(InputError):
    pass


class ComplexMismatch(InputError):
    pass


class NotLocallyConstant(InputError):
    pass


class InvalidRepresentation(InputError):
    pass


class RelatorViolation(InputError):
    pass


class NotTrivialSubgroupTable(InputError):
    pass


class NonFieldRing(InputError):
    pass


class SizeCapExceeded(SheafBNError):
    """A bar cochain group would exceed the configured entry cap."""


class InfiniteOrUnknownGroup(SheafBNError):
    """Coset enumeration did not close within the budget."""
