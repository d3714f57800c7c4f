"""Exception hierarchy for wgemit."""


class WgemitError(Exception):
    """Base class for all wgemit errors."""


class DomainError(WgemitError, ValueError):
    """Invalid physical input (non-guiding stack, out-of-range argument, ...)."""


class CutoffError(WgemitError):
    """A mode vanished under a perturbation (e.g. while differentiating at cutoff)."""


class ConvergenceError(WgemitError):
    """A numerical procedure failed to reach its requested tolerance."""


class NoModesError(WgemitError):
    """No confined mode exists anywhere in the requested parameter range."""
