from enum import Enum

__all__ = (
    "ApproxOrder",
)


class ApproxOrder(Enum):
    """
    Represents the order of the heavy traffic expansion of the inverse blocking probability.
    """
    FIRST = 1
    SECOND = 2
