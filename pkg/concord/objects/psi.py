from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

__all__ = (
    "PsiPoint",
    "KStarResult",
)


@dataclass(frozen=True, slots=True)
class PsiPoint:
    """
    Represents the per-server utilization of the larger side of a duopoly.

    Attributes
    ----------
        k : int
            Servers of the coalition.
        psi : float
            Arrival rate per server, ``lambda_k / k``.
        lambda_k : float
            Equilibrium rate of the coalition against the merged rest of the market.
    """
    k: int
    psi: float
    lambda_k: float


@dataclass(frozen=True, slots=True)
class KStarResult:
    """
    Represents the server counts maximising per-server utilization.

    Attributes
    ----------
        maximizers : tuple[int, ...]
            Achievable counts within the tie tolerance of the maximum, ascending. Empty when no
            coalition is strictly larger than half the market.
        psi_max : float
            The maximal utilization, ``nan`` when ``maximizers`` is empty.
        achievable_ks : tuple[int, ...]
            Subset sums strictly between ``N / 2`` and ``N``.
        points : tuple[:class:`concord.objects.PsiPoint`, ...]
            Utilization at every achievable count.
        half_split : Optional[:class:`concord.objects.PsiPoint`]
            The equal-halves point, reported when ``N / 2`` is a subset sum.
    """
    maximizers: tuple[int, ...]
    psi_max: float
    achievable_ks: tuple[int, ...]
    points: tuple[PsiPoint, ...] = field(default=())
    half_split: Optional[PsiPoint] = None

    @property
    def representative(self) -> Optional[int]:
        """The smallest maximizer, falling back to the half split."""
        if self.maximizers:
            return self.maximizers[0]
        if self.half_split is not None:
            return self.half_split.k
        return None

    def __contains__(self, k: object) -> bool:
        return k in self.maximizers
