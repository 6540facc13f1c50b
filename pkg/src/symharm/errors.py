"""Exception types raised across the package."""


class SymHarmError(Exception):
    """Base class for all package errors."""


class ClosureOverflow(SymHarmError):
    pass


class NotClosed(SymHarmError):
    pass


class AmbiguousMatch(SymHarmError):
    pass


class NonIntegerIndicator(SymHarmError):
    pass


class ProbeFailed(SymHarmError):
    pass


class NoIsomorphism(SymHarmError):
    pass


class NotPotentiallyReal(SymHarmError):
    pass


class AllProbesZero(SymHarmError):
    pass


class NotIsotropic(SymHarmError):
    pass


class EigenFailure(SymHarmError):
    """Jacobi sweeps did not converge."""


NoConvergence = EigenFailure


class SpectrumViolation(SymHarmError):
    pass


class DegreeOutOfRange(SymHarmError, ValueError):
    pass


class IrrepNotRealified(SymHarmError):
    pass


class CountMismatch(SymHarmError):
    """Gram-Schmidt produced a block count that disagrees with the character oracle."""


class SchemaMismatch(SymHarmError, ValueError):
    pass


class ChecksumMismatch(SymHarmError, ValueError):
    pass
