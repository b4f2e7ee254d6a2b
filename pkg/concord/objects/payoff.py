from __future__ import annotations

from typing import TYPE_CHECKING, Iterable, Iterator

from concord.exceptions import InvalidData

if TYPE_CHECKING:
    from concord.objects.coalition import CoalitionSet

__all__ = (
    "PayoffVector",
)

NEGATIVE_SLACK = 1e-12


class PayoffVector:
    """
    Represents the per-agent share of the market, ``payoffs[i]`` being agent ``i``'s rate.

    Operations
    ----------
        .. describe:: len(x)

            Returns the number of agents.

        .. describe:: x[i]

            Returns agent ``i``'s payoff.

        .. describe:: for p in x

            Iterates the payoffs in agent order.

        .. describe:: x == y

            Checks if two vectors are identical.

    Attributes
    ----------
        payoffs : tuple[float, ...]
            Non-negative payoffs.
    """

    __slots__ = ('_payoffs',)

    def __init__(self, payoffs: Iterable[float]) -> None:
        values = []
        for value in payoffs:
            value = float(value)
            if value < -NEGATIVE_SLACK or value != value:
                raise InvalidData(f"Payoffs must be non-negative, got {value}")
            values.append(max(value, 0.0))

        self._payoffs: tuple[float, ...] = tuple(values)

    @property
    def payoffs(self) -> tuple[float, ...]:
        return self._payoffs

    def total(self, coalition: CoalitionSet) -> float:
        """Sum of the payoffs of the members of ``coalition``."""
        return sum(self._payoffs[i] for i in coalition)

    def transfer(self, source: int, target: int, amount: float) -> PayoffVector:
        """
        Moves ``amount`` from ``source`` to ``target``; block sums are preserved when both
        agents share a block.
        """
        values = list(self._payoffs)
        values[source] -= amount
        values[target] += amount
        return PayoffVector(values)

    def quantized(self, step: float) -> tuple[int, ...]:
        return tuple(round(value / step) for value in self._payoffs)

    def __len__(self) -> int:
        return len(self._payoffs)

    def __getitem__(self, index: int) -> float:
        return self._payoffs[index]

    def __iter__(self) -> Iterator[float]:
        return iter(self._payoffs)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PayoffVector):
            return NotImplemented
        return self._payoffs == other._payoffs

    def __hash__(self) -> int:
        return hash(self._payoffs)

    def __repr__(self) -> str:
        return f"<concord.objects.PayoffVector payoffs={[round(p, 6) for p in self._payoffs]}>"
