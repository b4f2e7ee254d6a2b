from __future__ import annotations

import math
from typing import Callable

from loguru import logger

from concord.exceptions import NoConvergenceError

__all__ = (
    "expand_bracket",
    "bisect",
)


def expand_bracket(
        func: Callable[[float], float],
        guess: float,
        *,
        factor: float = 2.0,
        max_steps: int = 2000
) -> tuple[float, float]:
    """
    Brackets the root of an increasing function on the positive half line.

    Starting at ``guess`` the bracket is grown geometrically, down when ``func(guess) > 0``
    and up otherwise, until the sign changes.

    Parameters
    ----------
        func : Callable[[float], float]
            Increasing function with a single positive root.
        guess : float
            Positive starting point.
        factor : float
            Growth factor per step. Defaults to 2.
        max_steps : int
            Growth steps allowed before giving up.

    Raises
    ------
        NoConvergenceError
            If no sign change is found within ``max_steps``.

    Returns
    -------
        tuple[float, float]
            ``(lo, hi)`` with ``func(lo) <= 0 <= func(hi)``.
    """
    lo = hi = guess
    if func(guess) > 0:
        for _ in range(max_steps):
            lo = hi / factor
            if func(lo) <= 0:
                return lo, hi
            hi = lo
    else:
        for _ in range(max_steps):
            hi = lo * factor
            if func(hi) >= 0:
                return lo, hi
            lo = hi

    raise NoConvergenceError(f"No sign change found within {max_steps} geometric steps from {guess}")


def bisect(
        func: Callable[[float], float],
        lo: float,
        hi: float,
        *,
        tol: float,
        max_iterations: int = 200
) -> tuple[float, float, int]:
    """
    Bisection on an increasing function with ``func(lo) <= 0 <= func(hi)``.

    Stops once ``|func(x)| <= tol``. When the bracket shrinks to floating point resolution
    before that, the best midpoint is returned and a warning logged.

    Parameters
    ----------
        func : Callable[[float], float]
            Increasing function.
        lo : float
            Lower end of the bracket.
        hi : float
            Upper end of the bracket.
        tol : float
            Absolute tolerance on ``func``.
        max_iterations : int
            Iteration budget. Defaults to 200.

    Raises
    ------
        NoConvergenceError
            If the budget runs out first.

    Returns
    -------
        tuple[float, float, int]
            The root estimate, the residual ``func(x)`` and the iterations used.
    """
    best_x, best_f = lo, func(lo)
    if abs(best_f) <= tol:
        return best_x, best_f, 0

    high_f = func(hi)
    if abs(high_f) < abs(best_f):
        best_x, best_f = hi, high_f
    if abs(best_f) <= tol:
        return best_x, best_f, 0

    for iteration in range(1, max_iterations + 1):
        mid = 0.5 * (lo + hi)
        value = func(mid)

        if abs(value) < abs(best_f):
            best_x, best_f = mid, value
        if abs(value) <= tol:
            return mid, value, iteration

        if value > 0:
            hi = mid
        else:
            lo = mid

        if hi - lo <= 4 * math.ulp(max(abs(lo), abs(hi))):
            logger.warning(f"Bisection bracket collapsed at {best_x!r} with residual {best_f:.3e} > {tol:.3e}")
            return best_x, best_f, iteration

    raise NoConvergenceError(f"Bisection did not reach tolerance {tol:.3e} within {max_iterations} iterations")
