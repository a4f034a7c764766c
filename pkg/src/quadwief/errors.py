"""Exception hierarchy shared by all quadwief modules."""


class QuadwiefError(Exception):
    """Base class for all domain errors raised by this package."""


class NotSquarefree(QuadwiefError):
    """d has a square factor and does not define a quadratic field context."""


class DegenerateD(QuadwiefError):
    """d in {0, 1} does not define a quadratic field."""


class FieldMismatch(QuadwiefError):
    """Two elements from different field contexts were combined."""


class NonResidue(QuadwiefError):
    """Square root requested for a non-residue modulo p."""


class ImaginaryField(QuadwiefError):
    """Operation requires a real quadratic field (d > 1)."""


class PeriodOverflow(QuadwiefError):
    """Continued-fraction period not found within the iteration cap."""

    def __init__(self, message, steps):
        super().__init__(message)
        self.steps = steps


class ParseError(QuadwiefError):
    """Element literal does not match the grammar."""

    def __init__(self, message, position=None):
        super().__init__(message)
        self.position = position


class NonIntegral(QuadwiefError):
    """Half-integer coordinates with the wrong parity: not in O_K."""


class EvenRamified(QuadwiefError):
    """Residue arithmetic above a ramified 2 with d = 3 mod 4 is unsupported."""


class UnsupportedLevel(QuadwiefError):
    """Residue ring level outside the supported range 1..3."""


class BaseInIdeal(QuadwiefError):
    """The base lies in the prime ideal; orders and Wieferich data undefined."""


class NonAdmissibleBase(QuadwiefError):
    """The base is zero or a root of unity."""


class IncompleteFactorization(QuadwiefError):
    """A required integer factorization did not complete within budget."""


class ZeroIdeal(QuadwiefError):
    """x^n - 1 vanished; the generated ideal is the zero ideal."""


class ZeroElement(QuadwiefError):
    """Heights are undefined for the zero element."""


class NotCoprimeIndices(QuadwiefError):
    """The gcd lemma requires coprime cyclotomic indices."""
