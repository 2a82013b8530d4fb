"""Exception types shared across the package."""


class InvalidArgumentError(ValueError):
    """An argument violates a documented precondition."""


class FeasibilityError(RuntimeError):
    """No candidate satisfies the requested constraint.

    ``best_value`` carries the best constraint value that was reached, when
    the failing routine can report one.
    """

    def __init__(self, message, best_value=None):
        super().__init__(message)
        self.best_value = best_value


class ConfigError(ValueError):
    """Base class for configuration problems."""


class ConfigParseError(ConfigError):
    def __init__(self, message, line=None, column=None):
        where = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(f"{message}{where}")
        self.line = line
        self.column = column


class ConfigValidationError(ConfigError):
    def __init__(self, field, message):
        super().__init__(f"{field}: {message}")
        self.field = field


class UnknownKeyError(ConfigError):
    def __init__(self, key):
        super().__init__(f"unknown key '{key}'")
        self.key = key


def annotate(exc: BaseException, name: str, value) -> BaseException:
    """Prefix ``exc``'s message with the sweep point it arose at (once)."""
    if getattr(exc, "sweep_point", None) is None:
        exc.sweep_point = (name, value)
        if exc.args and isinstance(exc.args[0], str):
            exc.args = (f"at {name}={value}: {exc.args[0]}",) + exc.args[1:]
    return exc
