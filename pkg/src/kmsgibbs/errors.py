"""Exception types shared across the package."""


class KmsGibbsError(Exception):
    """Base class for all package errors."""


class NotationError(KmsGibbsError, ValueError):
    """Malformed cylinder, pair or word notation."""


class GapError(KmsGibbsError, ValueError):
    """Set operation would leave unconstrained slots inside a window."""


class DegenerateError(KmsGibbsError, ValueError):
    """Quantity undefined for equal points (e.g. distance zero)."""


class ContextError(KmsGibbsError, ValueError):
    """Homoclinic pair carries too little context to evaluate the cocycle."""


class ConvergenceError(KmsGibbsError, RuntimeError):
    """Power iteration did not reach tolerance within the iteration cap."""


class CapExceededError(KmsGibbsError, ValueError):
    """A configured size cap (span, hull, depth) would be exceeded."""


class InconsistentError(KmsGibbsError, RuntimeError):
    """Linear constraint system has no solution within tolerance."""
