"""Exception hierarchy shared by every module of the package."""


class EmptyFatouError(Exception):
    """Base class; ``name`` is what the CLI prints on the diagnostic stream."""

    @property
    def name(self) -> str:
        return type(self).__name__


# configuration / construction
class ConfigError(EmptyFatouError):
    pass


class NotPrime(ConfigError):
    pass


class DegreeTooLarge(ConfigError):
    pass


class NoIrreducibleFound(ConfigError):
    pass


class BadParameters(ConfigError):
    pass


class ExponentTooLarge(ConfigError):
    pass


class LiteralError(ConfigError, ValueError):
    pass


# arithmetic
class PrecisionExhausted(EmptyFatouError, ArithmeticError):
    pass


class FieldMismatch(EmptyFatouError, TypeError):
    pass


class NotIntegral(EmptyFatouError, ValueError):
    pass


class BothCoordinatesVanish(PrecisionExhausted):
    pass


class IndeterminatePoint(PrecisionExhausted):
    pass


# symbolic side
class EmptyWord(EmptyFatouError, ValueError):
    pass


class DecodeAmbiguous(EmptyFatouError):
    pass


class DecodeEmpty(EmptyFatouError):
    pass


class WitnessNotFound(EmptyFatouError):
    def __init__(self, message: str, best_distance_log: int | None = None):
        super().__init__(message)
        self.best_distance_log = best_distance_log


class OrbitError(EmptyFatouError):
    """An iteration failed; ``step`` is the index of the point that could not be computed."""

    def __init__(self, step: int, cause: EmptyFatouError):
        super().__init__(f"step {step}: {cause.name}: {cause}")
        self.step = step
        self.cause = cause

    @property
    def name(self) -> str:
        return self.cause.name
