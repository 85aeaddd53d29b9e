"""Exception taxonomy shared across the package.

Errors fall into three bands: bad input (caller misuse, CLI exit 2),
honest negative results that checks report as FAIL lines rather than
raising, and internal-consistency failures (two routes to the same
quantity disagreeing, CLI exit 3).  Only the first and third band are
exceptions; the middle band lives in reports.
"""


class ChamberError(Exception):
    """Base class for all package errors."""


class InternalCheckError(ChamberError):
    """Two independent computations of the same quantity disagreed.

    Raising this means the library caught itself being inconsistent;
    it is never a statement about the input.
    """


# ---- complex construction and queries ----------------------------------

class EmptyInput(ChamberError):
    pass


class NotPure(ChamberError):
    pass


class BadLabelling(ChamberError):
    pass


class Disconnected(ChamberError):
    pass


class NotAFace(ChamberError):
    pass


class NeedsLabels(ChamberError):
    pass


class ScaleExceeded(ChamberError):
    pass


# ---- axiom structures ---------------------------------------------------

class NotAPartialOrder(ChamberError):
    def __init__(self, message, cycle=()):
        super().__init__(message)
        self.cycle = tuple(cycle)


class NoUniqueMinimum(ChamberError):
    pass


class GatePropertyFails(ChamberError):
    pass


class NoOpposite(ChamberError):
    pass


class MultipleOpposites(ChamberError):
    pass


# ---- shellings -----------------------------------------------------------

class NotAShelling(ChamberError):
    def __init__(self, message, position=None, witness=None):
        super().__init__(message)
        self.position = position
        self.witness = witness


class NotThin(ChamberError):
    pass


class EulerMismatch(InternalCheckError):
    pass


# ---- arrangements and bands ---------------------------------------------

class DegenerateNormal(ChamberError):
    pass


class RealizabilityFailure(InternalCheckError):
    pass


class NotSimplicial(ChamberError):
    pass


class ProductUndefined(ChamberError):
    pass


# ---- walks ----------------------------------------------------------------

class ReducibleChain(ChamberError):
    def __init__(self, message, classes=()):
        super().__init__(message)
        self.classes = tuple(tuple(c) for c in classes)


class RankMismatch(ChamberError):
    pass


class NotGraded(ChamberError):
    pass


# ---- buildings ------------------------------------------------------------

class NonPrimeField(ChamberError):
    pass


class NotInApartment(ChamberError):
    pass


class NotOpposite(ChamberError):
    pass


class OracleMismatch(InternalCheckError):
    pass


# ---- catalog and file formats ---------------------------------------------

class BadN(ChamberError):
    pass


class UnknownEntry(ChamberError):
    pass


class FormatError(ChamberError):
    def __init__(self, message, lineno=None):
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)
        self.lineno = lineno
