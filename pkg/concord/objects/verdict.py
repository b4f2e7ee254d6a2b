from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from concord.enums import MoveKind, StabilityRule
from concord.objects.coalition import CoalitionSet

__all__ = (
    "BlockWitness",
    "StabilityVerdict",
)


@dataclass(frozen=True, slots=True)
class BlockWitness:
    """
    Represents a coalition that blocks a configuration and the two sides of the comparison.

    Attributes
    ----------
        blocker : :class:`concord.objects.CoalitionSet`
            The blocking coalition.
        kind : :class:`concord.enums.MoveKind`
            Merger, split or general move.
        anticipated_value : float
            What the blocker expects to earn on its own.
        prevailing_worth : float
            What its members hold in the current configuration.
        source : Optional[:class:`concord.objects.CoalitionSet`]
            The block a split breaks away from, if any.
    """
    blocker: CoalitionSet
    kind: MoveKind
    anticipated_value: float
    prevailing_worth: float
    source: Optional[CoalitionSet] = None

    def __post_init__(self) -> None:
        if not self.anticipated_value > self.prevailing_worth:
            raise ValueError(
                f"A witness needs anticipated value {self.anticipated_value!r} "
                f"above prevailing worth {self.prevailing_worth!r}"
            )

    @property
    def gain(self) -> float:
        return self.anticipated_value - self.prevailing_worth


@dataclass(frozen=True, slots=True)
class StabilityVerdict:
    """
    Represents the outcome of testing a configuration against a blocking rule.

    Attributes
    ----------
        stable : bool
            True when no candidate coalition blocks.
        rule : :class:`concord.enums.StabilityRule`
            The rule tested.
        witness : Optional[:class:`concord.objects.BlockWitness`]
            The first blocker in candidate order, absent iff ``stable``.
        payoff_dependent : bool
            Whether the verdict could change under another consistent payoff. Only restricted
            rules with imperfect anticipation can report a payoff-free verdict.
    """
    stable: bool
    rule: StabilityRule
    witness: Optional[BlockWitness] = None
    payoff_dependent: bool = True

    def __post_init__(self) -> None:
        if self.stable == (self.witness is not None):
            raise ValueError("A verdict is stable exactly when it carries no witness")

    def __bool__(self) -> bool:
        return self.stable
