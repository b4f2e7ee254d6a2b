from __future__ import annotations

import math

import numpy as np
from scipy.special import gammaln, logsumexp

from concord.exceptions import DomainError
from concord.utils import bisect, expand_bracket

__all__ = (
    "erlang_b",
    "erlang_b_factorial",
    "log_erlang_b",
    "inverse_erlang_b",
)

INVERSE_TOLERANCE = 1e-12
INVERSE_MAX_ITERATIONS = 200


def _check(n: int, a: float) -> None:
    if isinstance(n, bool) or int(n) != n or n < 0:
        raise DomainError(f"Server count must be a non-negative integer, got {n!r}")
    if not a >= 0 or math.isinf(a):
        raise DomainError(f"Offered load must be non-negative and finite, got {a!r}")


def erlang_b(n: int, a: float) -> float:
    """
    Blocking probability of a loss system with ``n`` servers and offered load ``a``.

    Uses the recurrence ``B(m) = a B(m - 1) / (m + a B(m - 1))`` from ``B(0) = 1``, which stays
    in ``[0, 1]`` and never overflows.

    Parameters
    ----------
        n : int
            Number of servers, non-negative.
        a : float
            Offered load in erlangs, non-negative.

    Raises
    ------
        DomainError
            If ``n`` or ``a`` is negative or not finite.

    Returns
    -------
        float
    """
    _check(n, a)

    blocking = 1.0
    for m in range(1, int(n) + 1):
        blocking = a * blocking / (m + a * blocking)
    return blocking


def log_erlang_b(n: int, a: float) -> float:
    """
    Natural log of the blocking probability from the factorial sum, with log-sum-exp.

    Returns ``-inf`` when ``a == 0`` and ``n > 0``.
    """
    _check(n, a)

    if a == 0:
        return 0.0 if n == 0 else -math.inf

    j = np.arange(int(n) + 1)
    terms = j * math.log(a) - gammaln(j + 1)
    return float(terms[-1] - logsumexp(terms))


def erlang_b_factorial(n: int, a: float) -> float:
    """
    Blocking probability evaluated from ``(a^n / n!) / sum_j a^j / j!``.

    Slower than :func:`erlang_b` and kept as an independent check of it.
    """
    return math.exp(log_erlang_b(n, a))


def inverse_erlang_b(
        n: int,
        target_b: float,
        *,
        guess: float = 1.0,
        tol: float = INVERSE_TOLERANCE
) -> float:
    """
    Offered load at which ``n`` servers block with probability ``target_b``.

    The bracket grows geometrically from ``guess`` and is then bisected until
    ``|B(n, a) / target_b - 1| <= tol``. The relative test keeps tiny targets meaningful and
    implies ``|B(n, a) - target_b| <= tol``.

    Parameters
    ----------
        n : int
            Number of servers, at least 1.
        target_b : float
            Target probability in ``(0, 1)``.
        guess : float
            Starting load of the bracket search. Defaults to 1.
        tol : float
            Relative tolerance on the blocking probability.

    Raises
    ------
        DomainError
            If ``n < 1`` or ``target_b`` is outside ``(0, 1)``.
        NoConvergenceError
            If the bisection budget runs out.

    Returns
    -------
        float
    """
    if isinstance(n, bool) or int(n) != n or n < 1:
        raise DomainError(f"Inverse needs at least one server, got {n!r}")
    if not 0 < target_b < 1:
        raise DomainError(f"Target blocking probability must lie in (0, 1), got {target_b!r}")
    if not guess > 0 or math.isinf(guess):
        guess = 1.0

    def excess(a: float) -> float:
        return erlang_b(n, a) / target_b - 1.0

    lo, hi = expand_bracket(excess, guess)
    load, _, _ = bisect(excess, lo, hi, tol=tol, max_iterations=INVERSE_MAX_ITERATIONS)
    return load
