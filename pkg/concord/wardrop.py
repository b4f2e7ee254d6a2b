from __future__ import annotations

import math
from collections import Counter
from typing import Optional

from loguru import logger

from concord.cache import LFUCache
from concord.core import validate_partition
from concord.enums import CacheCapacity
from concord.erlang import erlang_b, inverse_erlang_b, log_erlang_b
from concord.exceptions import DomainError, NoConvergenceError
from concord.objects import Partition, PsiPoint, SystemSpec, WardropResult
from concord.utils import bisect

__all__ = (
    "wardrop_split",
    "psi",
    "h_residual",
    "set_cache_capacity",
    "clear_cache",
    "cache_stats",
)

LOG_BLOCKING_LOW = math.log(1e-300)
LOG_BLOCKING_HIGH = math.log1p(-1e-12)
MAX_ITERATIONS = 400

# (total rate, service rate, sorted block sizes) -> (B*, residual, iterations, ((size, load), ...))
_Solution = tuple[float, float, int, tuple[tuple[int, float], ...]]
_cache: LFUCache[_Solution] = LFUCache(capacity=CacheCapacity.MEDIUM.value)


def set_cache_capacity(capacity: CacheCapacity | int) -> None:
    """
    Replaces the equilibrium memo table with an empty one of the given capacity.
    """
    global _cache
    size = capacity.value if isinstance(capacity, CacheCapacity) else int(capacity)
    _cache = LFUCache(capacity=size)


def clear_cache() -> None:
    _cache.clear()


def cache_stats() -> tuple[int, int, int]:
    """``(hits, misses, entries)`` of the equilibrium memo table."""
    return _cache.hits, _cache.misses, len(_cache)


def _bracket(excess, start: float) -> tuple[float, float]:
    """
    Brackets the zero of an increasing ``excess`` in log-blocking space around ``start``.

    Raises
    ------
        NoConvergenceError
            If the zero lies outside the representable blocking range.
    """
    x = min(max(start, LOG_BLOCKING_LOW), LOG_BLOCKING_HIGH)
    step = 1.0

    if excess(x) < 0:
        while x < LOG_BLOCKING_HIGH:
            nxt = min(x + step, LOG_BLOCKING_HIGH)
            if excess(nxt) >= 0:
                return x, nxt
            x, step = nxt, step * 2
        raise NoConvergenceError(
            f"Common blocking exceeds 1 - 1e-12; the market overloads every block (excess {excess(x):.3e})"
        )

    while x > LOG_BLOCKING_LOW:
        nxt = max(x - step, LOG_BLOCKING_LOW)
        if excess(nxt) <= 0:
            return nxt, x
        x, step = nxt, step * 2
    raise NoConvergenceError(
        f"Common blocking falls below 1e-300; the market is too light to split (excess {excess(x):.3e})"
    )


def _solve(spec: SystemSpec, sizes: tuple[int, ...]) -> _Solution:
    multiplicity = Counter(sizes)
    warm: dict[int, float] = {size: spec.offered_load * size / spec.total_servers for size in multiplicity}

    def total_rate(log_blocking: float) -> float:
        target = math.exp(log_blocking)
        total = 0.0
        for size, count in multiplicity.items():
            load = inverse_erlang_b(size, target, guess=warm[size])
            warm[size] = load
            total += count * load
        return total * spec.service_rate

    def excess(log_blocking: float) -> float:
        return total_rate(log_blocking) - spec.total_rate

    start = math.log(max(erlang_b(spec.total_servers, spec.offered_load), 1e-300))
    lo, hi = _bracket(excess, start)
    log_blocking, _, iterations = bisect(
        excess, lo, hi, tol=spec.tol_feas, max_iterations=MAX_ITERATIONS
    )

    blocking = math.exp(log_blocking)
    loads = {size: inverse_erlang_b(size, blocking, guess=warm[size]) for size in multiplicity}

    # One Newton step in log B spreads the leftover rate over the blocks by their sensitivity,
    # d load / d log B = 1 / (N / a - 1 + B), so no single block absorbs it.
    slopes = {size: 1.0 / (size / load - 1.0 + blocking) for size, load in loads.items()}
    gap = spec.offered_load - sum(count * loads[size] for size, count in multiplicity.items())
    shift = gap / sum(count * slopes[size] for size, count in multiplicity.items())
    loads = {size: max(load + slopes[size] * shift, 0.0) for size, load in loads.items()}
    blocking = math.exp(log_blocking + shift)

    residual = abs(spec.service_rate * sum(count * loads[size] for size, count in multiplicity.items())
                   - spec.total_rate)
    if residual > spec.tol_feas:
        raise NoConvergenceError(f"Equilibrium for sizes {sizes} is off by {residual:.3e} in total rate")

    spread = max(abs(erlang_b(size, load) - blocking) for size, load in loads.items())
    if spread > spec.tol_blocking:
        raise NoConvergenceError(f"Blocking of sizes {sizes} differs by {spread:.3e} at the equilibrium")

    return blocking, residual, iterations, tuple(loads.items())


def wardrop_split(spec: SystemSpec, partition: Partition, *, validate: bool = True) -> WardropResult:
    """
    Solves for the unique split of the market under which every block blocks equally often.

    The common blocking probability ``B*`` is found by bisection in log space on
    ``S(B*) = mu * sum_C inverse_erlang_b(N_C, B*)``, which increases with ``B*``, until
    ``|S(B*) - total rate|`` falls within the feasibility tolerance. A final Newton step in log space shares
    the leftover rate among the blocks, which keeps their blocking equal to ``tol_blocking``.
    Blocks of equal size get equal rates, so solves are memoized on the multiset of block sizes.

    Parameters
    ----------
        spec : :class:`concord.objects.SystemSpec`
            The market.
        partition : :class:`concord.objects.Partition`
            The arrangement to solve.
        validate : bool
            Whether to check the partition first. Defaults to True.

    Raises
    ------
        OverlapError
            If two blocks share an agent.
        CoverageError
            If an agent is left out.
        NoConvergenceError
            If the bisection exhausts its budget, the common blocking leaves
            ``[1e-300, 1 - 1e-12]`` or the blocks end further apart than ``tol_blocking``.

    Returns
    -------
        :class:`concord.objects.WardropResult`
    """
    if validate:
        partition = validate_partition(spec, partition)

    blocks = partition.blocks
    if len(blocks) == 1:
        return WardropResult(
            blocks=blocks,
            rates=(spec.total_rate,),
            common_blocking=erlang_b(spec.total_servers, spec.offered_load),
            residual=0.0,
        )

    sizes = tuple(block.servers(spec) for block in blocks)
    key = (spec.total_rate, spec.service_rate, tuple(sorted(sizes)))

    solution: Optional[_Solution] = _cache.get(key)
    if solution is None:
        solution = _solve(spec, key[2])
        _cache.put(key, solution)
        logger.debug(
            f"Equilibrium for sizes {key[2]} at rate {spec.total_rate}: "
            f"B*={solution[0]:.6e}, residual={solution[1]:.3e}, {solution[2]} iterations"
        )

    blocking, residual, iterations, loads = solution
    load_of = dict(loads)
    return WardropResult(
        blocks=blocks,
        rates=tuple(spec.service_rate * load_of[size] for size in sizes),
        common_blocking=blocking,
        residual=residual,
        iterations=iterations,
    )


def psi(spec: SystemSpec, k: int) -> PsiPoint:
    """
    Per-server rate of a coalition of ``k`` servers facing the rest of the market merged.

    Parameters
    ----------
        spec : :class:`concord.objects.SystemSpec`
            The market; only its total servers and rates matter.
        k : int
            Coalition servers, ``0 < k < N``.

    Raises
    ------
        DomainError
            If ``k`` is outside ``(0, N)``.

    Returns
    -------
        :class:`concord.objects.PsiPoint`
    """
    total = spec.total_servers
    if isinstance(k, bool) or int(k) != k or not 0 < k < total:
        raise DomainError(f"Coalition size must be an integer in (0, {total}), got {k!r}")

    duopoly = SystemSpec([int(k), total - int(k)], spec.total_rate, spec.service_rate)
    result = wardrop_split(duopoly, Partition.singletons(2), validate=False)
    rate = next(rate for block, rate in zip(result.blocks, result.rates) if block.servers(duopoly) == k)
    return PsiPoint(k=int(k), psi=rate / k, lambda_k=rate)


def h_residual(spec: SystemSpec, k: int, lam: float) -> float:
    """
    Signed gap between the blocking of ``k`` servers at rate ``lam`` and of the other
    ``N - k`` servers at the remaining rate.

    The gap is taken between log-blocking probabilities and mapped through ``tanh(x / 2)``, so
    it lies in ``[-1, 1]``, equals ``-1`` at ``lam = 0`` and ``1`` at the total rate, and
    vanishes exactly at the equilibrium rate of the coalition.

    Raises
    ------
        DomainError
            If ``k`` is outside ``(0, N)`` or ``lam`` outside ``[0, total rate]``.
    """
    total = spec.total_servers
    if not 0 < k < total:
        raise DomainError(f"Coalition size must lie in (0, {total}), got {k!r}")
    if not 0 <= lam <= spec.total_rate:
        raise DomainError(f"Rate must lie in [0, {spec.total_rate}], got {lam!r}")

    if lam == 0:
        return -1.0
    if lam == spec.total_rate:
        return 1.0

    inside = log_erlang_b(k, lam / spec.service_rate)
    outside = log_erlang_b(total - k, (spec.total_rate - lam) / spec.service_rate)
    return math.tanh((inside - outside) / 2)
