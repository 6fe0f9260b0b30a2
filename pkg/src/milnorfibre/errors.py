"""Exception taxonomy shared by every module and by the CLI exit codes."""


class MilnorFibreError(Exception):
    """Base class for all domain errors raised by the package."""


class PolySyntaxError(MilnorFibreError, ValueError):
    def __init__(self, message, position):
        super().__init__(f"{message} at position {position}")
        self.position = position


class UnknownVariable(MilnorFibreError, ValueError):
    def __init__(self, name, position):
        super().__init__(f"unknown variable {name!r} at position {position}")
        self.name = name
        self.position = position


class DegreeBoundExceeded(MilnorFibreError):
    pass


class NotAGerm(MilnorFibreError):
    pass


class NotIsolated(MilnorFibreError):
    pass


class IrrationalCenter(MilnorFibreError):
    pass


class NonRationalCenter(MilnorFibreError):
    pass


class ResolutionError(MilnorFibreError):
    """The blowup loop did not reach normal crossings within its budget."""


class NoPresentation(MilnorFibreError):
    pass


class UnsupportedShape(MilnorFibreError):
    pass


class UnitVanishesOnStratum(MilnorFibreError):
    pass


class GridDegeneracy(MilnorFibreError):
    pass


class VerificationFailed(MilnorFibreError):
    pass
