"""Exception classes shared across the package."""


class HardyOpsError(Exception):
    """Base class for all package errors."""


class InvalidParameter(HardyOpsError, ValueError):
    """A constructor argument violates its precondition."""


class DimensionMismatch(HardyOpsError, ValueError):
    """Operands have incompatible fiber dimensions or orders."""


class BandTooWide(HardyOpsError, ValueError):
    """The truncation order is too small for the symbol band."""


class WindowRefused(HardyOpsError):
    """The trusted window is too small to support a rank decision."""


class NotInner(HardyOpsError, ValueError):
    """A symbol failed an inner-function certification."""


class MembershipError(HardyOpsError, ValueError):
    """A free perturbation term violates its subspace constraint.

    ``index`` names the offending term, ``which`` the list it came from.
    """

    def __init__(self, message, which=None, index=None):
        super().__init__(message)
        self.which = which
        self.index = index


class ScenarioError(HardyOpsError, ValueError):
    """A scenario file could not be parsed or resolved."""


class VerificationFailed(HardyOpsError):
    """A synthesized operator did not meet its own invariance assertion."""
