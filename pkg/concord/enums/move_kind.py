from enum import Enum

__all__ = (
    "MoveKind",
)


class MoveKind(Enum):
    """
    Represents how a candidate coalition relates to the prevailing partition.
    """
    MERGER = 'merger'
    SPLIT = 'split'
    GENERAL = 'general'
