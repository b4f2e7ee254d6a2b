from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from concord.enums import StabilityRule, Terminal
from concord.objects.coalition import CoalitionSet
from concord.objects.configuration import Configuration
from concord.objects.partition import Partition
from concord.objects.verdict import BlockWitness
from concord.utils import format_row, mask_of

__all__ = (
    "TraceStep",
    "DynamicsTrace",
    "A1Report",
)


@dataclass(frozen=True, slots=True)
class TraceStep:
    """
    Represents one move of the coalition formation process.

    Attributes
    ----------
        index : int
            Step number, starting at 1.
        configuration : :class:`concord.objects.Configuration`
            The configuration reached by the move.
        witness : :class:`concord.objects.BlockWitness`
            The blocker chosen at this step.
        previous_payoff : tuple[float, ...]
            Payoffs before the move.
    """
    index: int
    configuration: Configuration
    witness: BlockWitness
    previous_payoff: tuple[float, ...]

    @property
    def blocker_gains(self) -> tuple[float, ...]:
        payoff = self.configuration.payoff
        return tuple(payoff[i] - self.previous_payoff[i] for i in self.witness.blocker)


@dataclass(frozen=True, slots=True)
class DynamicsTrace:
    """
    Represents a finished coalition formation trace.

    Attributes
    ----------
        initial : :class:`concord.objects.Configuration`
            Starting configuration.
        steps : tuple[:class:`concord.objects.TraceStep`, ...]
            Moves in order.
        terminal : :class:`concord.enums.Terminal`
            How the trace ended.
        seed : int
            Seed of the generator that picked the blockers.
        rule : :class:`concord.enums.StabilityRule`
            Blocking rule in force.
    """
    initial: Configuration
    steps: tuple[TraceStep, ...]
    terminal: Terminal
    seed: int
    rule: StabilityRule

    @property
    def final(self) -> Configuration:
        return self.steps[-1].configuration if self.steps else self.initial

    def __len__(self) -> int:
        return len(self.steps)

    def export(self, labels: Optional[tuple[int, ...]] = None) -> str:
        """
        Renders the trace as comma separated lines.

        Each line holds the step index, the restricted growth string of the partition, the
        blocker bitmask, the move kind and every agent's payoff. Step 0 is the initial
        configuration with an empty blocker and kind.

        Parameters
        ----------
            labels : Optional[tuple[int, ...]]
                Original agent positions, as in :attr:`concord.objects.SystemSpec.labels`;
                agents are renumbered by them when given.

        Returns
        -------
            str
        """
        n = self.initial.partition.n
        labels = labels or tuple(range(n))
        order = sorted(range(n), key=lambda i: labels[i])

        def relabel(cfg: Configuration) -> tuple[str, list[float]]:
            partition = Partition.from_masks((mask_of(block.labelled(labels)) for block in cfg.partition), n)
            return partition.rgs_string, [cfg.payoff[i] for i in order]

        header = ['step', 'rgs', 'blocker', 'kind'] + [f'phi_{i}' for i in range(n)]
        lines = [','.join(header)]

        rgs, payoffs = relabel(self.initial)
        lines.append(','.join(format_row([0, rgs, '', '', *payoffs])))
        for step in self.steps:
            rgs, payoffs = relabel(step.configuration)
            blocker = mask_of(step.witness.blocker.labelled(labels))
            lines.append(','.join(format_row([step.index, rgs, blocker, step.witness.kind.value, *payoffs])))

        return '\n'.join(lines) + '\n'


@dataclass(frozen=True, slots=True)
class A1Report:
    """
    Represents the outcome of checking that no subset beats its coalition per server.

    Attributes
    ----------
        holds : bool
            Whether the condition holds on every coalition checked.
        counterexample : Optional[tuple[CoalitionSet, CoalitionSet]]
            The violating ``(coalition, subset)`` pair when it does not.
        checked : int
            Number of coalitions checked.
    """
    holds: bool
    counterexample: Optional[tuple[CoalitionSet, CoalitionSet]] = None
    checked: int = 0

    def __bool__(self) -> bool:
        return self.holds
