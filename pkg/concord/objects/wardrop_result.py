from __future__ import annotations

from dataclasses import dataclass

from concord.objects.coalition import CoalitionSet

__all__ = (
    "WardropResult",
)


@dataclass(frozen=True, slots=True)
class WardropResult:
    """
    Represents the equilibrium split of the market across the blocks of a partition.

    Attributes
    ----------
        blocks : tuple[:class:`concord.objects.CoalitionSet`, ...]
            Blocks in canonical partition order.
        rates : tuple[float, ...]
            Equilibrium arrival rate of each block, aligned with ``blocks``.
        common_blocking : float
            The blocking probability shared by every block.
        residual : float
            ``|sum(rates) - total rate|`` achieved by the solver.
        iterations : int
            Outer bisection steps spent, 0 for a single block. A memo hit reports the
            steps of the solve that filled the memo.
    """
    blocks: tuple[CoalitionSet, ...]
    rates: tuple[float, ...]
    common_blocking: float
    residual: float
    iterations: int = 0

    def rate_of(self, block: CoalitionSet) -> float:
        """
        Equilibrium rate of one block.

        Raises
        ------
            KeyError
                If ``block`` is not a block of the solved partition.
        """
        try:
            return self.rates[self.blocks.index(block)]
        except ValueError as error:
            raise KeyError(f"{block} is not a block of this equilibrium") from error

    def total(self) -> float:
        return sum(self.rates)
