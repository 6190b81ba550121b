"""Exception hierarchy shared by all modules.

Everything a user can trigger with bad input derives from :class:`LogicError`;
the CLI maps those to exit code 1.  :class:`InvariantError` signals a bug in
this package and maps to exit code 2.
"""


class LogicError(Exception):
    pass


class ExprSyntaxError(LogicError, ValueError):
    def __init__(self, message: str, text: str = "", position: int = 0):
        self.text = text
        self.position = position
        super().__init__(f"{message} at position {position}")


class UnknownVariableError(LogicError, ValueError):
    def __init__(self, name: str, position: int | None = None):
        self.name = name
        self.position = position
        where = "" if position is None else f" at position {position}"
        super().__init__(f"unknown variable {name!r}{where}")


class MissingVariableError(LogicError, KeyError):
    def __init__(self, name: str):
        self.name = name
        super().__init__(name)

    def __str__(self) -> str:
        return f"no value assigned to variable {self.name!r}"


class DontCareError(LogicError, ValueError):
    pass


class BoundExceededError(LogicError, ValueError):
    pass


class CoverError(LogicError, ValueError):
    pass


class CapacityError(LogicError, ValueError):
    def __init__(self, message: str, required: int, available: int, output: str | None = None):
        self.required = required
        self.available = available
        self.output = output
        super().__init__(message)


class NetlistError(LogicError, ValueError):
    pass


class SimulationError(LogicError, ValueError):
    pass


class FormatError(LogicError, ValueError):
    """Malformed file content.  ``line`` is 1-based when known."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(message if line is None else f"line {line}: {message}")


class InvariantError(AssertionError):
    pass
