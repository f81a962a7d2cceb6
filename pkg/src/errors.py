from typing import List, Optional


class LBCodeError(Exception):
    """Base class for every error raised by the library"""


class ParameterError(LBCodeError, ValueError):
    pass


class WindowRangeError(LBCodeError, IndexError):
    pass


class FramingError(LBCodeError, ValueError):
    """Payload length does not fit the block structure of a scheme"""


class CorruptionError(LBCodeError):
    """Coded data that no encoder with the same parameters could have produced"""


class HeaderError(LBCodeError, ValueError):
    pass


class NoCodeError(LBCodeError):
    pass


class TableError(LBCodeError, ValueError):
    def __init__(self, message: str, violations: Optional[List[str]] = None):
        super().__init__(message)
        self.violations = violations or []


class ConvergenceError(LBCodeError):
    def __init__(self, message: str, result=None):
        super().__init__(message)
        self.result = result


class CountOverflowError(LBCodeError, OverflowError):
    def __init__(self, message: str, n_reached: int):
        super().__init__(message)
        self.n_reached = n_reached
