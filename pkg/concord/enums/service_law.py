from enum import Enum

__all__ = (
    "ServiceLaw",
)


class ServiceLaw(Enum):
    """
    Represents the service time distribution used by the loss system simulator.
    """
    EXPONENTIAL = 'exponential'
    DETERMINISTIC = 'deterministic'
