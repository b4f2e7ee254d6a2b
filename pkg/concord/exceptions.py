__all__ = (
    "ConcordException",
    "InvalidData",
    "OverlapError",
    "CoverageError",
    "InconsistentPayoffError",
    "DomainError",
    "SizeLimitError",
    "NoConvergenceError",
    "NoFeasibleKError",
    "NotStableError",
    "WitnessVerificationError",
)


class ConcordException(Exception):
    """
    Base class for Concord exceptions.

    Tip
    ---
        When catching errors, you can use this error class without using all other error classes
    """


class InvalidData(ConcordException):
    """
    Represents an invalid data error. Throws when a system, partition or payload is not valid.
    """


class OverlapError(InvalidData):
    """
    Represents a partition overlap error. Throws when two blocks of a partition share an agent.
    """

    def __init__(self, agent: int) -> None:
        self.agent: int = agent
        super().__init__(f"Agent {agent} belongs to more than one block")


class CoverageError(InvalidData):
    """
    Represents a partition coverage error. Throws when an agent is not assigned to any block.
    """

    def __init__(self, agent: int) -> None:
        self.agent: int = agent
        super().__init__(f"Agent {agent} is not assigned to any block")


class InconsistentPayoffError(InvalidData):
    """
    Represents a payoff consistency error.
    Throws when the block sums of a payoff vector do not reproduce the equilibrium rates.
    """


class DomainError(ConcordException):
    """
    Represents a domain error. Throws when an argument lies outside the domain of a formula.
    """


class SizeLimitError(ConcordException):
    """
    Represents a size limit error. Throws when an exhaustive enumeration would exceed its guard.
    """

    def __init__(self, what: str, size: int, limit: int) -> None:
        self.size: int = size
        self.limit: int = limit
        super().__init__(f"{what} supports at most {limit} agents, got {size}")


class NoConvergenceError(ConcordException):
    """
    Represents a convergence error. Throws when an iterative solver exhausts its iteration budget.
    """


class NoFeasibleKError(ConcordException):
    """
    Represents an infeasible coalition size. Throws when no proper subset sum exceeds half the servers.
    """


class NotStableError(ConcordException):
    """
    Represents a stability precondition error. Throws when a configuration is already blocked.
    """


class WitnessVerificationError(ConcordException):
    """
    Represents a failed self check. Throws when a constructed stable payoff does not verify.

    Note
    ----
        This signals a bug in the construction, not a property of the system.
    """
