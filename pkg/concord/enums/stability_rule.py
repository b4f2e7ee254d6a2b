from enum import Enum

__all__ = (
    "StabilityRule",
)


class StabilityRule(Enum):
    """
    Represents the blocking rules a configuration can be tested against.

    ``RB_IA`` restricts blockers to mergers and splits and estimates the worth of a split imprecisely,
    ``RB_PA`` uses the same blockers with the exact prevailing worth,
    ``GB_PA`` lets any coalition outside the partition block with the exact prevailing worth.
    """
    RB_IA = 'rb-ia'
    RB_PA = 'rb-pa'
    GB_PA = 'gb-pa'

    @property
    def restricted(self) -> bool:
        return self is not StabilityRule.GB_PA
