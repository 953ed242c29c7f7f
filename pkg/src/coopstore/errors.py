"""Exception types raised by the library.

Everything derives from CoopstoreError so callers can catch broadly; the
CLI maps CoopstoreError to exit code 2 (usage/config) unless a verification
is what failed (exit code 1).
"""


class CoopstoreError(Exception):
    """Base class for all library errors."""


# --- field / matrix construction ---------------------------------------


class NonPrimeModulus(CoopstoreError):
    pass


class ReduciblePolynomial(CoopstoreError):
    pass


class FieldTooSmall(CoopstoreError):
    pass


class FieldKindUnsupported(CoopstoreError):
    pass


class DuplicatePoint(CoopstoreError):
    pass


class DependentPoints(CoopstoreError):
    pass


class Singular(CoopstoreError):
    """Matrix rank < dimension where an inverse/solution was required."""


class DimensionMismatch(CoopstoreError):
    pass


# --- codes and repair ----------------------------------------------------


class SelfRepair(CoopstoreError):
    pass


class InvalidContext(CoopstoreError):
    pass


class MissingShard(CoopstoreError):
    pass


class DuplicateNode(CoopstoreError):
    pass


class TooFewShards(CoopstoreError):
    pass


class InvalidGroup(CoopstoreError):
    pass


class NotGenerator(CoopstoreError):
    pass


class InadmissibleOmega(CoopstoreError):
    """The diagonal-code admissibility condition on omega fails."""

    def __init__(self, message, condition_value=None):
        super().__init__(message)
        self.condition_value = condition_value


class SingularLeakageMatrix(CoopstoreError):
    pass


class ParameterTooSmall(CoopstoreError):
    pass


# --- eavesdropper / analysis ----------------------------------------------


class InvalidEveModel(CoopstoreError):
    pass


class InvalidL(CoopstoreError):
    pass


class LemmaViolation(CoopstoreError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class InstanceTooLarge(CoopstoreError):
    pass


class NonIntegralParams(CoopstoreError):
    pass


# --- secure precoding ------------------------------------------------------


class NotCoveredRegime(CoopstoreError):
    pass


class LengthMismatch(CoopstoreError):
    pass


# --- CLI / persistence -------------------------------------------------------


class InvalidConfig(CoopstoreError):
    pass


class IoError(CoopstoreError):
    pass


class CorruptShard(CoopstoreError):
    pass
