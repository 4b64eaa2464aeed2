"""Exception types shared across the library."""


class EorthoError(Exception):
    """Base class for all library errors."""


class DescriptorMismatch(EorthoError):
    """Operands belong to different rings."""


class NotInRing(EorthoError):
    """A literal or payload does not denote an element of the ring."""


class NotAUnit(EorthoError):
    """Inversion of a non-unit; ``witness`` explains why (gcd, offending term, ...)."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class NotDiagonal(EorthoError):
    """Operation needs a diagonal quadratic space."""


class NotOrthogonal(EorthoError):
    """Matrix fails M^T Phi M = Phi."""


class IsotropicVector(EorthoError):
    """Reflection vector has non-unit length."""


class NotHyperbolicForm(EorthoError):
    """Operation needs the gram matrix of the quadratic space to be fully hyperbolic."""


class PreconditionViolated(EorthoError):
    """Index or argument constraints of a generator operation are violated."""


class SamePlane(EorthoError):
    """Both indices of an oe generator fall in one hyperbolic plane."""


class UnsupportedConjugator(EorthoError):
    """Conjugator letter outside the covered rule families; carries the letter."""

    def __init__(self, message, letter=None, index=None):
        super().__init__(message)
        self.letter = letter
        self.index = index


class NotLocalRing(EorthoError):
    """Determinant witness shows the ring cannot be local; carries the witness."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class NonIntegralConjugator(EorthoError):
    """Conjugator prefix is not the localization of an integral word."""


class NotComaximal(EorthoError):
    """Cover elements do not generate the unit ideal."""
