"""Exception hierarchy.

Every error carries an ``exit_code`` so the CLI can map failures to process
exit statuses without a lookup table: 2 for configuration problems, 3 for
violated mathematical preconditions, 4 for mismatches found by check commands.
"""


class WeilHeightsError(Exception):
    exit_code = 3


class ConfigError(WeilHeightsError):
    exit_code = 2


class MathPreconditionError(WeilHeightsError):
    exit_code = 3


class MismatchFound(WeilHeightsError):
    """A check command found a counterexample; ``witness`` holds it."""

    exit_code = 4

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


# nfcore
class ReduciblePolynomial(MathPreconditionError):
    pass


class InconsistentBasis(MathPreconditionError):
    pass


class ZeroAtFinitePlace(MathPreconditionError):
    pass


class IndexDivisor(MathPreconditionError):
    pass


class AllZero(MathPreconditionError):
    pass


class ZeroIdeal(MathPreconditionError):
    pass


class DomainError(MathPreconditionError):
    pass


class UnsupportedField(MathPreconditionError):
    pass


class PrecisionExhausted(MathPreconditionError):
    pass


# heights
class IndeterminacyPoint(MathPreconditionError):
    pass


# piclattice
class NotBig(MathPreconditionError):
    pass


class DegenerateCone(MathPreconditionError):
    pass


class NotOnBoundary(MathPreconditionError):
    pass


class NotOnPolyhedralPart(MathPreconditionError):
    pass


class IncompatibleAction(MathPreconditionError):
    pass


class NonCyclic(MathPreconditionError):
    pass


class DivergentIntegral(MathPreconditionError):
    pass


# weilres
class InconsistentExtensionTable(MathPreconditionError):
    pass


class NotOnVariety(MathPreconditionError):
    pass


class NotQuadratic(MathPreconditionError):
    pass


# tamagawa
class NonStabilized(MathPreconditionError):
    def __init__(self, message, depths=()):
        super().__init__(message)
        self.depths = tuple(depths)


class SingularFactor(MathPreconditionError):
    pass


class GradientVanishes(MathPreconditionError):
    pass


class NonConvergent(MathPreconditionError):
    pass


# labcli
class InsufficientRungs(MathPreconditionError):
    pass


class DegenerateWindow(MathPreconditionError):
    pass


class NonSplitWitness(MismatchFound):
    pass
