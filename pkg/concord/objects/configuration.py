from __future__ import annotations

from concord.exceptions import InconsistentPayoffError
from concord.objects.partition import Partition
from concord.objects.payoff import PayoffVector
from concord.objects.wardrop_result import WardropResult

__all__ = (
    "Configuration",
)


class Configuration:
    """
    Represents a partition together with a payoff vector consistent with its equilibrium.

    Attributes
    ----------
        partition : :class:`concord.objects.Partition`
            The operating arrangement.
        payoff : :class:`concord.objects.PayoffVector`
            Per-agent shares.
        equilibrium : :class:`concord.objects.WardropResult`
            Equilibrium rates of ``partition``.
    """

    __slots__ = ('partition', 'payoff', 'equilibrium')

    def __init__(
            self,
            partition: Partition,
            payoff: PayoffVector,
            equilibrium: WardropResult,
            *,
            tolerance: float
    ) -> None:
        if len(payoff) != partition.n:
            raise InconsistentPayoffError(f"Expected {partition.n} payoffs, got {len(payoff)}")
        if equilibrium.blocks != partition.blocks:
            raise InconsistentPayoffError("Equilibrium was solved for a different partition")

        for block, rate in zip(partition.blocks, equilibrium.rates):
            share = payoff.total(block)
            if abs(share - rate) > tolerance:
                raise InconsistentPayoffError(
                    f"Block {block} receives {share!r} in payoffs but {rate!r} at equilibrium"
                )

        self.partition: Partition = partition
        self.payoff: PayoffVector = payoff
        self.equilibrium: WardropResult = equilibrium

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Configuration):
            return NotImplemented
        return self.partition == other.partition and self.payoff == other.payoff

    def __hash__(self) -> int:
        return hash((self.partition, self.payoff))

    def __repr__(self) -> str:
        return (
            f"<concord.objects.Configuration "
            f"partition={self.partition.to_string()}, "
            f"payoff={[round(p, 6) for p in self.payoff]}>"
        )
