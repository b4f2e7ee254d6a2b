from __future__ import annotations

from dataclasses import dataclass

from concord.objects.coalition import CoalitionSet

__all__ = (
    "SimEstimate",
    "BlockValidation",
)


@dataclass(frozen=True, slots=True)
class SimEstimate:
    """
    Represents a simulated blocking fraction with its batch-means confidence interval.

    Attributes
    ----------
        blocked_fraction : float
            Blocked arrivals over observed arrivals after warm-up.
        half_width_95 : float
            Half width of the 95% interval.
        arrivals_observed : int
            Arrivals counted after warm-up.
    """
    blocked_fraction: float
    half_width_95: float
    arrivals_observed: int

    @property
    def interval(self) -> tuple[float, float]:
        return self.blocked_fraction - self.half_width_95, self.blocked_fraction + self.half_width_95

    def covers(self, value: float) -> bool:
        low, high = self.interval
        return low <= value <= high


@dataclass(frozen=True, slots=True)
class BlockValidation:
    """
    Represents the simulated check of one block of a Wardrop split.

    Attributes
    ----------
        block : :class:`concord.objects.CoalitionSet`
            The block.
        servers : int
            Its pooled servers.
        rate : float
            Arrival rate fed to the simulation.
        target : float
            The analytic common blocking probability.
        estimate : :class:`concord.objects.SimEstimate`
            Simulation outcome.
    """
    block: CoalitionSet
    servers: int
    rate: float
    target: float
    estimate: SimEstimate

    @property
    def covered(self) -> bool:
        return self.estimate.covers(self.target)
