"""Exception hierarchy.

Each family carries the process exit code the CLI maps it to.
"""


class SwimError(ValueError):
    exit_code = 1


class ConfigError(SwimError):
    exit_code = 2

    def __init__(self, field, reason=""):
        self.field = field
        self.reason = reason
        msg = f"{field}: {reason}" if reason else field
        super().__init__(msg)


class MissingField(ConfigError):
    def __init__(self, field):
        super().__init__(field, "required field is missing")


class UnknownField(ConfigError):
    def __init__(self, field):
        super().__init__(field, "unknown field")


class InvalidValue(ConfigError):
    pass


class AcquisitionError(SwimError):
    exit_code = 3


class InvalidParameter(AcquisitionError):
    pass


class InvalidFrequency(InvalidParameter):
    pass


class EmptyScene(AcquisitionError):
    pass


class MixedFrequency(AcquisitionError):
    pass


class AliasingRisk(AcquisitionError):
    pass


class NotSettled(AcquisitionError):
    pass


class ReferenceMismatch(AcquisitionError):
    pass


class DegeneratePath(AcquisitionError):
    pass


class InvalidExtent(AcquisitionError):
    pass


class RenderError(SwimError):
    exit_code = 4


class EmptyFrame(RenderError):
    pass


class PathKindMismatch(RenderError):
    pass


class AnalysisError(SwimError):
    exit_code = 5


class NoOscillation(AnalysisError):
    pass


class InsufficientFringes(AnalysisError):
    pass


class InvalidArgument(AnalysisError):
    pass
