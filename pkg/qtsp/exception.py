"""
Exceptions
"""


class QTSPException(Exception):
    pass


class QTSPValueError(ValueError):
    pass


class QTSPConfigError(QTSPValueError):
    pass


class QTSPResourceError(QTSPException):
    def __init__(self, message: str, limit_name: str = None, limit: int = None):
        super().__init__(message)
        self.limit_name = limit_name
        self.limit = limit


class QTSPDiscrepancyError(QTSPException):
    def __init__(self, message: str, expected: float = None, actual: float = None):
        super().__init__(message)
        self.expected = expected
        self.actual = actual


class QTSPFileError(QTSPException):
    pass
