"""Exception types raised across the package."""


class AfavError(Exception):
    """Base class for all errors raised by afav."""


class StructuralError(AfavError, ValueError):
    """Operands have incompatible shapes or violate an affine invariant."""


class PrecisionError(AfavError, ArithmeticError):
    """An interval operation cannot be certified (e.g. division by an interval containing 0)."""


class ParameterError(AfavError, ValueError):
    """A construction or decision parameter is out of range."""


class InputError(AfavError, ValueError):
    """An input word is not over the machine alphabet or contains a reserved marker."""


class MachineFormatError(AfavError, ValueError):
    """A machine-definition or language-spec document could not be parsed."""

    def __init__(self, message, lineno=None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)


class SerializationError(AfavError, ValueError):
    """A machine cannot be written in the text format (interval-valued entries)."""


class ConfigurationError(AfavError, LookupError):
    """A live configuration has no transition on the symbol being read."""

    def __init__(self, state, symbol):
        self.state = state
        self.symbol = symbol
        super().__init__(f"no transition for (state={state!r}, symbol={symbol!r})")


class ResourceError(AfavError, RuntimeError):
    """The live-configuration budget was exceeded."""

    def __init__(self, message, step=None):
        self.step = step
        super().__init__(message)


class InvariantViolation(AfavError, AssertionError):
    """A reachable affine vector broke entry-sum-1 or the l1 >= 1 bound."""
