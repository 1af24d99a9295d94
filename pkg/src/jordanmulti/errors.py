"""Exception types raised across the package."""


class JordanError(Exception):
    """Base class for all errors raised by jordanmulti."""


class AmbientMismatchError(JordanError, ValueError):
    pass


class StructureError(JordanError, ValueError):
    """Input lacks a required structural property (symmetry, closure, ...)."""


class NoIdentityError(JordanError):
    pass


class IrrationalSpectrumError(JordanError):
    """Minimal polynomial does not split into distinct rational linear factors."""


class InvalidFrameError(JordanError, ValueError):
    pass


class MembershipError(JordanError, ValueError):
    pass


class PreconditionError(JordanError, ValueError):
    pass


class InvalidLabelError(JordanError, ValueError):
    pass
