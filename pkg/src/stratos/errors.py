"""Exception hierarchy shared by every module of the kernel."""


class StratosError(Exception):
    """Base class for all kernel errors."""


class LevelMismatch(StratosError):
    pass


class FreshnessViolation(StratosError):
    pass


class NotAComprehension(StratosError):
    pass


class NotDistinct(StratosError):
    pass


class TheoryNotThetaClosed(StratosError):
    pass


class InvalidDerivation(StratosError):
    pass


class NotStratified(StratosError):
    def __init__(self, message, subformula=None):
        super().__init__(message)
        self.subformula = subformula


class NotStratifiable(StratosError):
    def __init__(self, message, cycle=()):
        super().__init__(message)
        self.cycle = tuple(cycle)


class NotClosed(StratosError):
    pass


class ParseError(StratosError):
    def __init__(self, message, text="", pos=0):
        self.text = text
        self.pos = pos
        if text:
            message = f"{message} at column {pos + 1}: {text[:pos]}<HERE>{text[pos:]}"
        super().__init__(message)


class FuelExhausted(StratosError):
    """A recursion or step guard tripped; signals a bug, not a user error."""
