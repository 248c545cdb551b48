"""Exception hierarchy shared across the engine."""


class EvovoteError(Exception):
    """Base class for all engine errors."""


class MissingColumn(EvovoteError):
    pass


class NonNumericFeature(EvovoteError):
    pass


class NotBinary(EvovoteError):
    pass


class EmptyFile(EvovoteError):
    pass


class TooFewInstances(EvovoteError):
    pass


class InvalidFoldCount(EvovoteError):
    pass


class DegenerateTraining(EvovoteError):
    pass


class ShapeMismatch(EvovoteError):
    pass


class LengthMismatch(EvovoteError):
    pass


class EmptySelection(EvovoteError):
    pass


class EmptySet(EvovoteError):
    pass


class EvaluationFailed(EvovoteError):
    """Wraps a per-fold training failure; carries the fold index."""

    def __init__(self, fold: int, cause: str):
        self.fold = fold
        self.cause = cause
        super().__init__(f"evaluation failed at fold {fold}: {cause}")


class AlgorithmMismatch(EvovoteError):
    pass


class SpaceExhausted(EvovoteError):
    pass


class InsufficientParents(EvovoteError):
    pass


class EmptyEnsemble(EvovoteError):
    pass


class UnknownModelId(EvovoteError):
    pass


class DegenerateSpectrum(EvovoteError):
    pass


class TooFewPoints(EvovoteError):
    pass


class NoModels(EvovoteError):
    pass


class VersionMismatch(EvovoteError):
    pass


class SessionBusy(EvovoteError):
    """A mutating call arrived while a job is running."""
