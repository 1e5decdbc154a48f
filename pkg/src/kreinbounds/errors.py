"""Exception hierarchy.

Every failure the toolkit can report is a subclass of
:class:`KreinBoundsError`; the class name doubles as the error name the
command-line front end prints.
"""


class KreinBoundsError(Exception):
    """Base class for all toolkit errors."""


class DimensionMismatch(KreinBoundsError, ValueError):
    pass


class NotHermitian(KreinBoundsError, ValueError):
    """A diagonal block that must be Hermitian is not."""


class SetsIntersect(KreinBoundsError):
    """Two spectral sets share a point (within tolerance)."""


class NotUniformlyDefinite(KreinBoundsError):
    pass


class SpectraOverlap(KreinBoundsError):
    pass


class IllConditioned(KreinBoundsError):
    pass


class NonpositiveSeparation(KreinBoundsError, ValueError):
    pass


class NonRealSpectrum(KreinBoundsError):
    pass


class NoDefiniteInvariantSubspace(KreinBoundsError):
    pass


class NotAGraph(KreinBoundsError):
    """The invariant subspace is not (numerically) a graph over H0."""


class NotContractive(KreinBoundsError):
    pass


class TooLargePerturbation(KreinBoundsError, ValueError):
    pass


class HypothesesNotMet(KreinBoundsError):
    pass


class LambdaInSpectrumA1(KreinBoundsError, ValueError):
    pass


class LambdaInUnperturbedSpectrum(KreinBoundsError, ValueError):
    pass


class ProfileNotOdd(KreinBoundsError, ValueError):
    pass


class QuadratureUnconverged(KreinBoundsError):
    pass
