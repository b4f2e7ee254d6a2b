from __future__ import annotations

from dataclasses import dataclass

from concord.enums import ApproxOrder

__all__ = (
    "ApproxWE",
)


@dataclass(frozen=True, slots=True)
class ApproxWE:
    """
    Represents a heavy-traffic approximation of the larger coalition's equilibrium rate.

    Attributes
    ----------
        k : float
            Coalition servers, possibly relaxed to a real value.
        lambda_hat : float
            Approximate rate.
        order : :class:`concord.enums.ApproxOrder`
            Approximation order.
        iterations : int
            Iterations spent by the fixed-point or fallback solver.
        residual : float
            Absolute residual of the fixed-point equation.
    """
    k: float
    lambda_hat: float
    order: ApproxOrder
    iterations: int
    residual: float = 0.0

    @property
    def psi(self) -> float:
        return self.lambda_hat / self.k
