"""
Error types for the fraclab toolkit and their mapping onto CLI exit codes.
"""
import logging

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INVARIANT = 2


class FracLabError(Exception):
    """Base class for every error raised by the toolkit."""


class DomainError(FracLabError):
    """Bad geometry, a point outside the domain, or an unsupported basis."""


class ResolutionError(FracLabError):
    """Grid too coarse for the requested computation."""


class GridMismatchError(FracLabError):
    """Two objects that must share a grid do not."""


class ParameterError(FracLabError):
    """Fractional orders, cutoff widths or exponents outside their range."""


class ZeroExtensionError(FracLabError):
    """A function handed to a kernel operator does not vanish at the boundary."""


class AccuracyError(FracLabError):
    """A quadrature could not verify its own truncation error."""


class IntegrabilityError(FracLabError):
    """A weighted integral would diverge for the given field."""


class SolverError(FracLabError):
    """The sparse linear solve missed its residual tolerance."""


class ConfigError(FracLabError):
    """Experiment configuration could not be parsed or validated."""


class InvariantFailure(FracLabError):
    """An asserted experiment invariant did not hold."""


def exit_code_for(exc):
    """
    Map an exception onto the CLI exit code contract.

    Args:
        exc: Exception raised while running an experiment

    Returns:
        int: 1 for bad input (config, parameters, geometry, resolution),
        2 for invariant failures and any other numerical breakdown
    """
    if isinstance(exc, (ConfigError, ParameterError, DomainError, ResolutionError)):
        return EXIT_USAGE
    return EXIT_INVARIANT


def register_error_handlers(runner):
    """
    Wrap an experiment runner so that every error becomes an exit code.

    Args:
        runner: Callable returning an exit code

    Returns:
        Callable with the same signature that never raises
    """
    def handled(*args, **kwargs):
        try:
            return runner(*args, **kwargs)
        except FracLabError as exc:
            logger.error(f"{type(exc).__name__}: {exc}")
            return exit_code_for(exc)
        except Exception as exc:
            logger.error(f"Unhandled {type(exc).__name__}: {exc}", exc_info=True)
            return exit_code_for(exc)

    handled.__name__ = getattr(runner, "__name__", "handled")
    handled.__doc__ = runner.__doc__
    return handled
