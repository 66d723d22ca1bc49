"""Exception hierarchy shared by all modules."""


class CopulaLagError(Exception):
    """Base class for errors raised by this package."""


class InvalidInputError(CopulaLagError, ValueError):
    """Input values or arguments are malformed (non-finite, wrong shape, ...)."""


class InsufficientSampleError(CopulaLagError, ValueError):
    """Too few observations for the requested neighbor count or lag."""


class DegenerateSampleError(CopulaLagError, ValueError):
    """The sample carries no spread (constant series, all points identical)."""


class DimensionError(CopulaLagError, ValueError):
    """Wrong number of variables for the requested estimator."""


class ConfigurationError(CopulaLagError, ValueError):
    """A configuration value is outside its valid range."""


def with_context(exc: Exception, prefix: str, **context) -> Exception:
    """Copy `exc` with `prefix` prepended to its message and `context` attached.

    The copy keeps the original class so callers can still catch by type.
    """
    new = type(exc)(f"{prefix}: {exc}")
    for key, value in {**getattr(exc, "context", {}), **context}.items():
        setattr(new, key, value)
    new.context = {**getattr(exc, "context", {}), **context}
    return new
