"""Exception hierarchy shared by the algebra services and the CLI."""


class VirasoroError(Exception):
    """Base class for every error raised by the library."""
    pass


class MissingVariableError(VirasoroError, KeyError):
    """Raised when a polynomial is evaluated without a value for one of its variables."""

    def __init__(self, variable: str):
        self.variable = variable
        super().__init__(f"no value assigned to variable '{variable}'")

    def __str__(self) -> str:
        return self.args[0]


class ExpressionSyntaxError(VirasoroError, ValueError):
    """Raised when an algebra expression or rational literal cannot be parsed."""

    def __init__(self, message: str, token: str, position: int):
        self.token = token
        self.position = position
        super().__init__(f"{message}: unexpected token '{token}' at position {position}")


class InvalidParameterError(VirasoroError, ValueError):
    """Raised for arguments outside an operation's domain."""
    pass


class WindowEscapeError(VirasoroError):
    """Raised when a tensor product computation leaves its truncation window."""

    def __init__(self, level: int, exponent: int, window):
        self.level = level
        self.exponent = exponent
        self.window = window
        super().__init__(
            f"term at Verma level {level}, shifted exponent {exponent} "
            f"escapes window (level <= {window.max_level}, "
            f"{window.min_exponent} <= exponent <= {window.max_exponent})"
        )


class UndeterminedGeneratorsError(VirasoroError):
    """Raised when certified maximal-submodule generators are required but the scan hit its cap."""
    pass
