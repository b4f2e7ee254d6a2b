from __future__ import annotations

from typing import TYPE_CHECKING

from concord.abstract import PayoffRule
from concord.objects.payoff import PayoffVector

if TYPE_CHECKING:
    from concord.objects import CoalitionSet, Partition, SystemSpec, WardropResult

__all__ = (
    "EqualSurplus",
)


class EqualSurplus(PayoffRule):
    """
    Represents the equal-surplus reallocation. Extended from :class:`concord.abstract.PayoffRule`

    Every block of the new partition shares the change of its value equally among its members:
    ``phi_i + (lambda_C - sum_C phi) / |C|``. The blocker always gains this way. A non-blocking
    block whose equal share of a loss would drive a member below zero scales its members'
    payoffs proportionally instead.
    """

    def reallocate(
            self,
            spec: SystemSpec,
            old_payoff: PayoffVector,
            new_partition: Partition,
            new_equilibrium: WardropResult,
            blocker: CoalitionSet
    ) -> PayoffVector:
        values = list(old_payoff)

        for block, rate in zip(new_partition.blocks, new_equilibrium.rates):
            members = block.members
            held = old_payoff.total(block)
            share = (rate - held) / len(members)

            if block == blocker or all(old_payoff[i] + share >= 0 for i in members):
                for i in members:
                    values[i] = old_payoff[i] + share
            elif held > 0:
                for i in members:
                    values[i] = old_payoff[i] * rate / held
            else:
                for i in members:
                    values[i] = rate / len(members)

        return PayoffVector(values)
