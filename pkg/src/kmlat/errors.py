"""Exception hierarchy shared by all kmlat modules."""


class KMLatError(Exception):
    """Base class for every error raised by kmlat."""


class InputError(KMLatError, ValueError):
    """Malformed or inconsistent input data."""


class GCMError(InputError):
    """A matrix violates one of the generalized Cartan matrix axioms.

    ``entry`` is the (row, column) index of the offending entry.
    """

    axiom = "gcm"

    def __init__(self, entry, message=None):
        self.entry = tuple(entry)
        super().__init__(message or f"{self.axiom} violated at {self.entry}")


class NonTwoDiagonal(GCMError):
    axiom = "diagonal entries must equal 2"


class PositiveOffDiagonal(GCMError):
    axiom = "off-diagonal entries must be <= 0"


class AsymmetricZero(GCMError):
    axiom = "A[s][t] == 0 must imply A[t][s] == 0"


class DimensionMismatch(InputError):
    pass


class ResourceBudgetExceeded(KMLatError):
    """An enumeration grew past its configured element cap."""


class WallIncidence(KMLatError):
    """Internal error: a chamber was found lying on a wall."""


class NotPrenilpotent(InputError):
    pass


class DegenerateSegment(KMLatError):
    """A point could not be normalised into the closed fundamental chamber."""


class NonEmptyLeviPart(InputError):
    pass


class NotUnimodular(InputError):
    """A Laurent matrix does not have determinant exactly 1."""


class DegreeBudgetExceeded(KMLatError):
    """A Laurent polynomial exponent exceeded the configured bound."""


class InvarianceViolation(InputError):
    def __init__(self, pair, message=None):
        self.pair = tuple(pair)
        super().__init__(message or f"permutation does not preserve A at {self.pair}")


class UnsupportedOrbit(InputError):
    pass
