"""Exception hierarchy shared by every package"""


class D2pcError(Exception):
    """Base class for all errors raised by the library"""


class InvalidInputError(D2pcError, ValueError):
    """Non-finite data, inconsistent dimensions or an indefinite Hessian"""


class InsufficientDataError(D2pcError, ValueError):
    """A signal or episode is too short for the requested construction"""


class ExcitationError(D2pcError, RuntimeError):
    """No persistently exciting input could be drawn within the retry budget"""


class BenchmarkNotFoundError(D2pcError, LookupError):
    """Unknown benchmark name or table id"""


class ConfigurationError(D2pcError, ValueError):
    """Experiment or command-line configuration is invalid"""
