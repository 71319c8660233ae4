"""Exception hierarchy shared across the package."""


class LevyRepError(Exception):
    """Base class for all package-specific errors."""


class DomainError(LevyRepError):
    """An evaluation was requested outside the admissible analytic domain,
    e.g. an exponential moment that diverges at the requested damping."""


class QuadratureError(LevyRepError):
    """A numeric integral failed to converge within its node budget."""


class TruncationError(LevyRepError):
    """The tail of a Fourier integral could not be brought below tolerance
    within the maximum truncation bound."""


class InconclusiveError(LevyRepError):
    """A numeric assumption checker could not classify tail behaviour
    within its maximum grid extent."""


class AssumptionError(LevyRepError):
    """A structural assumption required by a construction is violated."""


class SchemeError(LevyRepError):
    """A simulation scheme is incompatible with the requested evaluation,
    e.g. step size inside the near-maturity validity window."""


class ParameterError(LevyRepError):
    """Invalid model or configuration parameters."""
