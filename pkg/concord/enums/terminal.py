from enum import Enum

__all__ = (
    "Terminal",
)


class Terminal(Enum):
    """
    Represents how a coalition formation trace ended.
    """
    STABLE = 'stable'
    STEP_CAP_REACHED = 'step-cap-reached'
    CYCLING = 'cycling'
