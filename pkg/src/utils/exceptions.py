class EngineError(Exception):
    """Base class for every error raised by the engine."""

    exit_code = 2


class DimensionMismatchError(EngineError):
    pass


class IllFormedHomError(EngineError):
    pass


class InfiniteGroupError(EngineError):
    pass


class ExtensionTooLargeError(EngineError):
    pass


class MalformedTemplateError(EngineError):
    pass


class InvalidComplexError(EngineError):
    pass


class NotASubcomplexError(EngineError):
    pass


class NotACoverError(EngineError):
    pass


class NonCellularMapError(EngineError):
    pass


class UnknownSpaceError(EngineError):
    pass


class InvalidParameterError(EngineError):
    pass


class NotAnFkmmSpaceError(EngineError):
    pass


class MismatchedTargetsError(EngineError):
    pass


class UnsupportedSpaceError(EngineError):
    pass


class SpaceFileError(EngineError):
    pass


class InternalInvariantError(EngineError):
    """An engine self-check failed. Never expected on a correct build."""

    exit_code = 3


class StabilityError(InternalInvariantError):
    pass


class ExactnessError(InternalInvariantError):
    pass


class LiftError(InternalInvariantError):
    pass
