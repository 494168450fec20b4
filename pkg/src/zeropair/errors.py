"""Exception hierarchy.  CLI exit codes key off these classes."""


class ZeroPairError(Exception):
    """Base class for all zeropair errors."""


class DomainError(ZeroPairError, ValueError):
    pass


class PoleError(ZeroPairError, ValueError):
    pass


class UnwrapError(ZeroPairError, ArithmeticError):
    pass


class NoSignChangeError(ZeroPairError, ValueError):
    pass


class ConvergenceError(ZeroPairError, ArithmeticError):
    pass


class IncompleteSetError(ZeroPairError):
    """A ZeroSet does not cover the range an operation needs."""


class UnsortedSetError(ZeroPairError, ValueError):
    pass


class ParseError(ZeroPairError, ValueError):
    def __init__(self, line: int, text: str, reason: str = "not a decimal ordinate"):
        self.line = line
        self.text = text
        super().__init__(f"line {line}: {reason}: {text!r}")


class MonotonicityError(ZeroPairError, ValueError):
    def __init__(self, line: int, value: float, previous: float):
        self.line = line
        super().__init__(f"line {line}: ordinate {value!r} does not exceed {previous!r}")


class FetchError(ZeroPairError, OSError):
    def __init__(self, url: str, attempts: int, cause: Exception):
        self.attempts = attempts
        super().__init__(f"GET {url} failed after {attempts} attempt(s): {cause}")


class CacheVersionError(ZeroPairError, ValueError):
    pass


class ChecksumError(ZeroPairError, ValueError):
    pass


class ConfigError(ZeroPairError, ValueError):
    pass
