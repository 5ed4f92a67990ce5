"""
Exception family with stable CLI exit codes
"""


class MdpError(Exception):
    """Base class; `exit_code` is the CLI contract"""
    exit_code = 1


class ModelError(MdpError):
    """Malformed model, policy, schedule or argument"""
    exit_code = 2


class SolverError(MdpError):
    """Iteration cap exceeded before the stopping rule held"""
    exit_code = 3

    def __init__(self, message: str, alpha: float = None, residual: float = None, index: int = None):
        super().__init__(message)
        self.alpha = alpha
        self.residual = residual
        self.index = index


class ExtractionError(MdpError):
    """Empty near-optimal action set at some state"""
    exit_code = 4

    def __init__(self, message: str, state: int = None):
        super().__init__(message)
        self.state = state


class VerificationError(MdpError):
    """A residual or exact check failed"""
    exit_code = 5
