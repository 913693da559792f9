"""Exception types raised across the package."""


class AlphaGanError(ValueError):
    """Base class for all domain errors."""


class AllZeroError(AlphaGanError):
    pass


class NonFiniteError(AlphaGanError):
    pass


class NegativeError(AlphaGanError):
    pass


class OutOfRangeError(AlphaGanError):
    pass


class SupportMismatchError(AlphaGanError):
    pass


class EmptyBatchError(AlphaGanError):
    pass


class DimensionMismatchError(AlphaGanError):
    pass


class NotApplicableError(AlphaGanError):
    pass


class UnknownCheckError(AlphaGanError):
    pass


class ConfigError(AlphaGanError):
    """Invalid training config; carries the offending line and field when known."""

    def __init__(self, message, *, line=None, field=None):
        self.line = line
        self.field = field
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"field '{field}'")
        prefix = f"{', '.join(where)}: " if where else ""
        super().__init__(prefix + message)


class DivergedError(AlphaGanError):
    """Training produced a non-finite loss or gradient."""

    def __init__(self, message, *, step=None):
        self.step = step
        super().__init__(message if step is None else f"step {step}: {message}")
