"""Exception hierarchy shared by every module of the package."""


class SpecSeqError(Exception):
    """Base class for all errors raised by specseq."""


class ParseError(SpecSeqError, SyntaxError):
    """Malformed polynomial text.  ``pos`` is the offending character offset."""

    def __init__(self, message, pos=None):
        super().__init__(message if pos is None else f"{message} (at position {pos})")
        self.pos = pos


class UnknownVariable(SpecSeqError, KeyError):
    pass


class DivisionByZero(SpecSeqError, ZeroDivisionError):
    pass


class NotAPerfectSquare(SpecSeqError, ValueError):
    pass


class VariableTableMismatch(SpecSeqError, ValueError):
    pass


class NotAStateVariable(SpecSeqError, ValueError):
    pass


class MissingImage(SpecSeqError, ValueError):
    pass


class NoSolution(SpecSeqError, ArithmeticError):
    """An affine system ``A x = b`` is inconsistent."""


class DimensionMismatch(SpecSeqError, ValueError):
    pass


class NotHomogeneous(SpecSeqError, ValueError):
    pass


class ChartMismatch(SpecSeqError, ValueError):
    pass


class NotInComplexChart(SpecSeqError, ValueError):
    pass


class ZeroWeightMonomial(SpecSeqError, ArithmeticError):
    """A target contains a monomial on which ad(H0) vanishes."""

    def __init__(self, monomial):
        super().__init__(f"monomial {monomial} has weight zero")
        self.monomial = monomial


class SingularHessian(SpecSeqError, ArithmeticError):
    pass


class IrrationalSpectrum(SpecSeqError, ArithmeticError):
    pass


class OddDimension(SpecSeqError, ValueError):
    pass


class FiltrationViolation(SpecSeqError, ValueError):
    pass


class InvalidRepresentative(SpecSeqError, ValueError):
    pass


class HypothesisFailure(SpecSeqError, ArithmeticError):
    """A structural assumption of a driver (e.g. surjectivity of d0) fails."""


class ChartFailure(SpecSeqError, ArithmeticError):
    pass
