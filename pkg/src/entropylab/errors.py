"""Exception types raised across the package."""


class EntropyLabError(Exception):
    pass


class NonConvexFlux(EntropyLabError, ValueError):
    pass


class NonStrictEntropy(EntropyLabError, ValueError):
    pass


class ZeroEntropyFlux(EntropyLabError, ZeroDivisionError):
    pass


class NotUnderCompressive(EntropyLabError, ValueError):
    pass


class InternalEquivalenceViolation(EntropyLabError, AssertionError):
    """Production sign and the Lax inequality disagreed. Always a bug."""


class NumericalFailure(EntropyLabError, RuntimeError):
    """Base for failures that the CLI maps to exit code 2."""


class EmptyFeasibleCone(NumericalFailure):
    pass


class CFLDegenerate(NumericalFailure):
    pass


class ResolutionError(EntropyLabError, ValueError):
    pass
