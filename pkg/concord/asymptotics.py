from __future__ import annotations

import math
from typing import Iterable, Optional, Sequence

from loguru import logger
from scipy.optimize import brentq

from concord.enums import ApproxOrder
from concord.erlang import erlang_b
from concord.exceptions import DomainError, InvalidData, NoConvergenceError, NoFeasibleKError
from concord.objects import ApproxWE, RegimeRow, RegimeTable, SystemSpec
from concord.stability import k_star
from concord.utils import subset_sums
from concord.wardrop import psi

__all__ = (
    "first_order_we",
    "second_order_we",
    "heavy_k_star",
    "light_k_star",
    "regime_crosscheck",
    "psi_curve",
)

DAMPING = 0.5
FIXED_POINT_TOLERANCE = 1e-10
MAX_ITERATIONS = 10_000


def first_order_we(k: float, total_servers: int, total_rate: float) -> float:
    """
    Rate of a coalition of ``k`` servers when both sides serve at the same per-server rate.

    Raises
    ------
        DomainError
            If ``k`` is outside ``(0, N)``.
    """
    if not 0 < k < total_servers:
        raise DomainError(f"Coalition size must lie in (0, {total_servers}), got {k!r}")
    return k * total_rate / total_servers


def _fixed_point_map(k: float, total_servers: int, total_rate: float):
    rest = total_servers - k

    def image(lam: float) -> float:
        other = total_rate - lam
        return k * other / rest * (1 + (k - 1) / lam) / (1 + (rest - 1) / other)

    return image


def second_order_we(
        k: float,
        total_servers: int,
        total_rate: float,
        *,
        damping: float = DAMPING,
        tol: float = FIXED_POINT_TOLERANCE,
        max_iterations: int = MAX_ITERATIONS
) -> ApproxWE:
    """
    Heavy-traffic rate of the larger side of a duopoly, corrected to second order.

    Solves ``lam = k (L - lam) / (N - k) * (1 + (k - 1) / lam) / (1 + (N - k - 1) / (L - lam))``
    by damped iteration from the first-order rate. When the iteration leaves ``(0, L)`` or does
    not settle, the fixed point is found by Brent's method on the same residual instead.

    Parameters
    ----------
        k : float
            Servers of the larger side, ``N / 2 <= k < N``, not necessarily an integer.
        total_servers : int
            Servers in the market.
        total_rate : float
            Market size.
        damping : float
            Weight of the new iterate. Defaults to 0.5.
        tol : float
            Absolute tolerance on ``|lam - image(lam)|``.
        max_iterations : int
            Iteration budget.

    Raises
    ------
        DomainError
            If ``k`` is outside ``[N / 2, N)`` or the rate is not positive.
        NoConvergenceError
            If neither the iteration nor the fallback reaches ``tol``.

    Returns
    -------
        :class:`concord.objects.ApproxWE`
    """
    if not total_servers <= 2 * k < 2 * total_servers:
        raise DomainError(f"Coalition size must lie in [{total_servers / 2}, {total_servers}), got {k!r}")
    if not total_rate > 0:
        raise DomainError(f"Market size must be positive, got {total_rate!r}")

    if 2 * k == total_servers:
        return ApproxWE(k=k, lambda_hat=total_rate / 2, order=ApproxOrder.SECOND, iterations=0)

    image = _fixed_point_map(k, total_servers, total_rate)
    lam = first_order_we(k, total_servers, total_rate)

    for iteration in range(1, max_iterations + 1):
        lam = (1 - damping) * lam + damping * image(lam)
        if not 0 < lam < total_rate:
            logger.debug(f"Fixed-point iteration for k={k} left the feasible range after {iteration} steps")
            break
        residual = abs(lam - image(lam))
        if residual <= tol:
            return ApproxWE(k=k, lambda_hat=lam, order=ApproxOrder.SECOND, iterations=iteration, residual=residual)
    else:
        iteration = max_iterations

    edge = total_rate * 1e-12
    lam, report = brentq(
        lambda x: x - image(x), edge, total_rate - edge, xtol=tol / 4, rtol=4 * math.ulp(1.0),
        maxiter=max_iterations, full_output=True, disp=False
    )
    residual = abs(lam - image(lam))
    if not report.converged or residual > tol:
        raise NoConvergenceError(f"Second-order rate for k={k} stuck at residual {residual:.3e}")

    return ApproxWE(
        k=k, lambda_hat=lam, order=ApproxOrder.SECOND, iterations=iteration + report.iterations, residual=residual
    )


def heavy_k_star(spec: SystemSpec) -> int:
    """
    Optimal size when the market is large: every agent except the smallest.

    Raises
    ------
        NoFeasibleKError
            For a single agent.
    """
    if spec.n < 2:
        raise NoFeasibleKError("A single agent has no proper coalition")
    return spec.total_servers - spec.server_counts[-1]


def light_k_star(spec: SystemSpec) -> int:
    """
    Optimal size when the market is small: the least proper subset sum above half the servers.

    Raises
    ------
        NoFeasibleKError
            If no proper coalition holds more than half the servers.
    """
    total = spec.total_servers
    above = [k for k in subset_sums(spec.server_counts) if total < 2 * k < 2 * total]
    if not above:
        raise NoFeasibleKError(f"No proper coalition of {list(spec.server_counts)} exceeds {total / 2} servers")
    return min(above)


def regime_crosscheck(spec: SystemSpec, lambda_grid: Sequence[float]) -> RegimeTable:
    """
    Solves the optimal sizes exactly over a grid of market sizes and compares them with both
    closed forms.

    The crossover is the first grid point from which every remaining row agrees with the
    heavy-traffic size.

    Raises
    ------
        InvalidData
            If the grid is empty or not strictly ascending.

    Returns
    -------
        :class:`concord.objects.RegimeTable`
    """
    grid = [float(x) for x in lambda_grid]
    if not grid or any(b <= a for a, b in zip(grid, grid[1:])):
        raise InvalidData("Market size grid must be non-empty and strictly ascending")

    heavy = heavy_k_star(spec)
    try:
        light: Optional[int] = light_k_star(spec)
    except NoFeasibleKError:
        light = None

    rows = []
    for rate in grid:
        result = k_star(spec.with_rate(rate))
        rows.append(RegimeRow(
            total_rate=rate,
            maximizers=result.maximizers,
            representative=result.representative,
            gc_blocking=erlang_b(spec.total_servers, rate / spec.service_rate),
            heavy_match=result.maximizers == (heavy,),
            light_match=light is not None and result.maximizers == (light,),
        ))

    crossover = None
    for row in reversed(rows):
        if not row.heavy_match:
            break
        crossover = row.total_rate

    return RegimeTable(rows=tuple(rows), heavy_k_star=heavy, light_k_star=light, crossover=crossover)


def psi_curve(
        spec: SystemSpec,
        ks: Iterable[float],
        order: Optional[ApproxOrder] = None
) -> tuple[tuple[float, float], ...]:
    """
    Per-server rate of the larger side for each ``k``.

    ``order=None`` solves the equilibrium exactly and needs integral ``k``; the approximations
    accept real ``k``.

    Raises
    ------
        DomainError
            If ``k`` is outside ``(0, N)``, or not integral when solving exactly.
    """
    total, rate = spec.total_servers, spec.total_rate
    out = []
    for k in ks:
        if order is None:
            value = psi(spec, k).psi
        elif order is ApproxOrder.FIRST:
            value = first_order_we(k, total, rate) / k
        else:
            value = second_order_we(k, total, rate).psi
        out.append((k, value))
    return tuple(out)
