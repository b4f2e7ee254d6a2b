from enum import Enum

__all__ = (
    "PessimalMode",
)


class PessimalMode(Enum):
    """
    Represents the evaluation strategy for a coalition's pessimistic anticipated rate.

    ``FAST`` merges every outside agent into one rival block,
    ``ORACLE`` minimises over every partition of the outside agents.
    """
    FAST = 'fast'
    ORACLE = 'oracle'
