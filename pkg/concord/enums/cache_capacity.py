from enum import Enum

__all__ = (
    "CacheCapacity",
)


class CacheCapacity(Enum):
    """
    Represents the capacity of the equilibrium memo table.
    """
    LITTLE = 256
    SMALL = 1024
    MEDIUM = 4096
    LARGE = 16384
    HUGE = 65536
