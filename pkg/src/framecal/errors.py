"""Exception hierarchy.

``InputError`` subclasses signal malformed or mismatched inputs (CLI exit 2);
``HypothesisError`` subclasses signal that a required hypothesis does not hold
for otherwise valid inputs (CLI exit 1).
"""


class FrameError(ValueError):
    pass


class InputError(FrameError):
    pass


class HypothesisError(FrameError):
    pass


class InternalConsistencyError(RuntimeError):
    """A proven identity failed numerically; indicates a bug, not bad input."""


# linalg
class NotHermitian(HypothesisError):
    pass


class NotPSD(HypothesisError):
    pass


class Singular(HypothesisError):
    pass


# measure
class NonPositiveWeight(InputError):
    pass


class DuplicateLabel(InputError):
    pass


class IndexOutOfRange(InputError):
    pass


class WouldBeEmpty(InputError):
    pass


# frames
class DimensionMismatch(InputError):
    pass


class SpaceMismatch(InputError):
    pass


class NotAFrame(HypothesisError):
    pass


class NotARepresentation(HypothesisError):
    pass


class NotRieszBasis(HypothesisError):
    pass


# duality / approximate duality
class NotDualPair(HypothesisError):
    pass


class KernelConditionViolated(HypothesisError):
    pass


class TransportConditionViolated(HypothesisError):
    pass


class DegenerateAtom(HypothesisError):
    pass


class NotDegenerate(HypothesisError):
    pass


class NotApproxDual(HypothesisError):
    pass


class HypothesisViolated(HypothesisError):
    pass


class NotParseval(HypothesisError):
    pass


# cwt
class NonPositiveGrid(InputError):
    pass


class GridTooCoarse(InputError):
    pass


# io
class MalformedDocument(InputError):
    pass
