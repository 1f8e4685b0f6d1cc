"""Exception hierarchy for the construction, verification and CLI layers."""

from typing import Optional


class KneserError(Exception):
    """Base class for all errors raised by this package."""

    exit_code = 1


class ParameterError(KneserError, ValueError):
    """Invalid (n, k), graph kind, bit value or permutation."""

    exit_code = 2


class CertificateParseError(KneserError, ValueError):
    """A certificate or dump file is malformed."""

    exit_code = 2

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        self.reason = message
        super().__init__(f"line {line}: {message}" if line is not None else message)


class CertificateValidationError(KneserError):
    """A well-formed certificate violates a structural constraint."""

    def __init__(self, clause: str, index: Optional[int], detail: str = ""):
        self.clause = clause
        self.index = index
        location = f"@{index}" if index is not None else ""
        super().__init__(f"{clause}{location}: {detail}" if detail else f"{clause}{location}")


class BaseCaseUnavailableError(KneserError):
    """No middle-levels cycle can be supplied for the requested k."""

    exit_code = 3

    def __init__(self, k: int, reason: str = ""):
        self.k = k
        message = f"no middle-levels base certificate available for k={k}"
        if reason:
            message = f"{message}: {reason}"
        super().__init__(message)


class BudgetExhaustedError(KneserError):
    """A search ran out of its time or expansion budget."""

    exit_code = 3

    def __init__(self, what: str, budget: float):
        self.what = what
        self.budget = budget
        super().__init__(f"{what} did not finish within {budget:g}s")


class InvariantViolationError(KneserError):
    """A built structure failed its own post-build verification."""

    def __init__(self, clause: str, n: int, k: int, detail: str = ""):
        self.clause = clause
        self.n = n
        self.k = k
        message = f"invariant '{clause}' violated for (n,k)=({n},{k})"
        if detail:
            message = f"{message}: {detail}"
        super().__init__(message)


class SelfVerificationError(KneserError):
    """A constructed certificate did not pass verification before writing."""

    exit_code = 4
