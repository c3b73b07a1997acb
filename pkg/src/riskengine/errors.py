"""Exception types raised across the risk engine.

Every error the library raises deliberately derives from
:class:`RiskEngineError`, so callers (notably the CLI) can distinguish
domain failures from genuine bugs.
"""


class RiskEngineError(Exception):
    """Base class for all errors raised by this package."""


# --- data ingestion -------------------------------------------------------

class MissingColumnError(RiskEngineError):
    """A required CSV column is absent."""


class UnparsableDateError(RiskEngineError):
    """A date cell is not a valid ISO-8601 calendar date."""


class UnparsablePriceError(RiskEngineError):
    """A close-price cell cannot be parsed as a number."""


class NonPositivePriceError(RiskEngineError):
    """A close price is zero, negative, or non-finite."""


class DuplicateDateError(RiskEngineError):
    """The same calendar date appears more than once in one series."""


class TooShortError(RiskEngineError):
    """The series is too short for the requested operation."""


class NoOverlapError(RiskEngineError):
    """Series in a panel share fewer than two calendar days."""


# --- numerics -------------------------------------------------------------

class DomainError(RiskEngineError):
    """An argument lies outside the mathematical domain of the operation."""


class MaxDepthExceededError(RiskEngineError):
    """Adaptive quadrature could not reach the requested tolerance."""


class NoSignChangeError(RiskEngineError):
    """Root bracketing failed: f(lo) and f(hi) have the same sign."""


class NonFiniteObjectiveError(RiskEngineError):
    """The objective is NaN or infinite at the starting point."""


# --- Pearson type-IV ------------------------------------------------------

class ShapeOutOfDomainError(DomainError):
    """Shape parameter m <= 2: no real standardizing scale exists."""


class ProbabilityOutOfDomainError(DomainError):
    """A probability argument lies outside the open interval (0, 1)."""


# --- GARCH ----------------------------------------------------------------

class NonPositiveVarianceError(RiskEngineError):
    """The variance recursion produced a non-positive or non-finite value."""


class EmptyPoolError(RiskEngineError):
    """The residual pool for bootstrap simulation is empty."""


# --- diagnostics ----------------------------------------------------------

class ZeroVarianceError(RiskEngineError):
    """The series is constant; the statistic is undefined."""


class SingularRegressionError(RiskEngineError):
    """The ARCH-LM design matrix is rank deficient."""


class LengthMismatchError(RiskEngineError):
    """Panel series differ in length or date alignment."""


# --- FHS / risk measures --------------------------------------------------

class EmptyResidualsError(RiskEngineError):
    """The fitted filter holds no standardized residuals to bootstrap."""


class TooFewTrialsError(RiskEngineError):
    """floor(level * trials) < 1: the tail holds no observations."""


class MissingLevelError(RiskEngineError):
    """The risk report lacks a level required for the comparison."""


# --- CLI ------------------------------------------------------------------

class ConfigError(RiskEngineError):
    """The run configuration is invalid or unreadable."""
