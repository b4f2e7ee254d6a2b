from __future__ import annotations

from abc import ABC, abstractmethod
from typing import TYPE_CHECKING

if TYPE_CHECKING:
    from concord.objects import CoalitionSet, Partition, PayoffVector, SystemSpec, WardropResult

__all__ = (
    "PayoffRule",
)


class PayoffRule(ABC):
    """Basic class of payoff reallocation rules applied after a coalition forms.

    Note
    ----
        The dynamics only rely on two guarantees: the new payoff is consistent with the new
        partition, and every member of the blocking coalition strictly gains.

    Operations
    ----------
        .. describe:: x == y

            Checks if two rules are the same kind of rule.

        .. describe:: hash(x)

            Return the rule's hash.
    """

    @abstractmethod
    def reallocate(
            self,
            spec: SystemSpec,
            old_payoff: PayoffVector,
            new_partition: Partition,
            new_equilibrium: WardropResult,
            blocker: CoalitionSet
    ) -> PayoffVector:
        """
        Computes the payoff vector after a merger or split.

        Parameters
        ----------
            spec : :class:`concord.objects.SystemSpec`
                The system.
            old_payoff : :class:`concord.objects.PayoffVector`
                Payoffs before the move.
            new_partition : :class:`concord.objects.Partition`
                Partition after the move.
            new_equilibrium : :class:`concord.objects.WardropResult`
                Equilibrium rates of ``new_partition``.
            blocker : :class:`concord.objects.CoalitionSet`
                The coalition that blocked the old configuration.

        Raises
        ------
            NotImplementedError
                If the method is not implemented in a subclass.

        Returns
        -------
            :class:`concord.objects.PayoffVector`
        """
        raise NotImplementedError

    def __hash__(self) -> int:
        return hash(type(self).__name__)

    def __eq__(self, other: object) -> bool:
        return type(self) is type(other)

    def __repr__(self) -> str:
        return f"<concord.abstract.PayoffRule name={type(self).__name__}>"
