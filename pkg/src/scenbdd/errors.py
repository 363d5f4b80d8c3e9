"""Exception hierarchy. Each class carries the CLI exit code it maps to."""


class ScenBddError(Exception):
    exit_code = 3


class ValidationError(ScenBddError):
    """Malformed or inconsistent input data."""

    exit_code = 1


class InstanceSyntaxError(ValidationError):
    def __init__(self, lineno, message):
        self.lineno = lineno
        super().__init__(f"line {lineno}: {message}" if lineno else message)


class InstanceError(ValidationError):
    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


class LadderError(ValidationError):
    pass


class RecourseUndefinedError(ValidationError):
    pass


class SizeCapError(ScenBddError):
    """A configured size guard was hit."""

    exit_code = 2


class BddSizeError(SizeCapError):
    def __init__(self, cap, created, layer_widths):
        self.cap = cap
        self.created = created
        self.layer_widths = layer_widths
        super().__init__(
            f"BDD node cap {cap} exceeded after creating {created} nodes "
            f"(partial layer widths: {layer_widths})"
        )


class InvariantError(ScenBddError):
    """An internal consistency check failed; indicates a bug, not bad input."""

    exit_code = 3
