from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from concord.enums import StabilityRule
from concord.objects.partition import Partition
from concord.objects.verdict import StabilityVerdict

__all__ = (
    "ScanRow",
    "StabilityReport",
    "RegimeRow",
    "RegimeTable",
)


@dataclass(frozen=True, slots=True)
class ScanRow:
    partition: Partition
    verdict: StabilityVerdict

    @property
    def stable(self) -> bool:
        return self.verdict.stable


@dataclass(frozen=True, slots=True)
class StabilityReport:
    """
    Represents the verdict on every partition of a system under one rule.

    Attributes
    ----------
        rule : :class:`concord.enums.StabilityRule`
            The rule scanned.
        rows : tuple[:class:`concord.objects.ScanRow`, ...]
            One row per partition, in restricted growth string order.
    """
    rule: StabilityRule
    rows: tuple[ScanRow, ...]

    @property
    def stable_partitions(self) -> tuple[Partition, ...]:
        return tuple(row.partition for row in self.rows if row.stable)

    def verdict_of(self, partition: Partition) -> StabilityVerdict:
        for row in self.rows:
            if row.partition == partition:
                return row.verdict
        raise KeyError(f"{partition!r} was not scanned")

    def __len__(self) -> int:
        return len(self.rows)


@dataclass(frozen=True, slots=True)
class RegimeRow:
    """
    Represents the optimal coalition size at one market size.

    Attributes
    ----------
        total_rate : float
            Market size.
        maximizers : tuple[int, ...]
            Exact maximizer set.
        representative : Optional[int]
            Smallest maximizer.
        gc_blocking : float
            Blocking probability of the grand coalition.
        heavy_match : bool
            Whether the maximizer set is exactly the heavy-traffic size.
        light_match : bool
            Whether the maximizer set is exactly the light-traffic size.
    """
    total_rate: float
    maximizers: tuple[int, ...]
    representative: Optional[int]
    gc_blocking: float
    heavy_match: bool
    light_match: bool


@dataclass(frozen=True, slots=True)
class RegimeTable:
    """
    Represents a sweep of the optimal coalition size over market sizes.

    Attributes
    ----------
        rows : tuple[:class:`concord.objects.RegimeRow`, ...]
            One row per grid point, ascending.
        heavy_k_star : int
            Heavy-traffic closed form.
        light_k_star : Optional[int]
            Light-traffic closed form, absent when no coalition exceeds half the market.
        crossover : Optional[float]
            First grid market size from which the exact set stays equal to the heavy-traffic
            size, absent if never.
    """
    rows: tuple[RegimeRow, ...]
    heavy_k_star: int
    light_k_star: Optional[int]
    crossover: Optional[float]

    def __len__(self) -> int:
        return len(self.rows)
