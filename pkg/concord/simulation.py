from __future__ import annotations

import math
from typing import Optional

import numpy as np
import simpy
from loguru import logger
from scipy.stats import norm

from concord.enums import ServiceLaw
from concord.exceptions import DomainError
from concord.objects import BlockValidation, Partition, SimEstimate, SystemSpec
from concord.wardrop import wardrop_split

__all__ = (
    "simulate_loss",
    "validate_we",
)

MIN_HORIZON = 10_000
WARMUP_FRACTION = 0.1
BATCHES = 20
CONFIDENCE = 0.95
RULE_OF_THREE = 3.0


def simulate_loss(
        n: int,
        lam: float,
        mu: float,
        horizon_arrivals: int,
        seed: int | np.random.SeedSequence,
        *,
        service: ServiceLaw = ServiceLaw.EXPONENTIAL,
        warmup: float = WARMUP_FRACTION,
        batches: int = BATCHES
) -> SimEstimate:
    """
    Simulates a loss system with ``n`` servers fed by a Poisson stream.

    An arrival finding every server busy is dropped. The first ``warmup`` share of arrivals is
    discarded and the rest is cut into ``batches`` consecutive batches whose blocked fractions
    give a normal 95% interval. When no arrival, or every arrival, was blocked the batches carry
    no spread, and the half width falls back to the rule of three, ``3 / arrivals observed``.

    Parameters
    ----------
        n : int
            Servers.
        lam : float
            Arrival rate.
        mu : float
            Service rate of one server.
        horizon_arrivals : int
            Arrivals to simulate, at least 10000.
        seed : int | :class:`numpy.random.SeedSequence`
            Seed of the arrival and service draws.
        service : :class:`concord.enums.ServiceLaw`
            Service time law with mean ``1 / mu``.
        warmup : float
            Share of arrivals discarded.
        batches : int
            Number of batches.

    Raises
    ------
        DomainError
            If an argument is outside its range.

    Returns
    -------
        :class:`concord.objects.SimEstimate`
    """
    if n < 1 or not lam > 0 or not mu > 0:
        raise DomainError(f"Need n >= 1 and positive rates, got n={n}, lam={lam}, mu={mu}")
    if horizon_arrivals < MIN_HORIZON:
        raise DomainError(f"Horizon must be at least {MIN_HORIZON} arrivals, got {horizon_arrivals}")

    rng = np.random.default_rng(seed)
    gaps = rng.exponential(1 / lam, horizon_arrivals)
    if service is ServiceLaw.EXPONENTIAL:
        durations = rng.exponential(1 / mu, horizon_arrivals)
    else:
        durations = np.full(horizon_arrivals, 1 / mu)

    env = simpy.Environment()
    servers = simpy.Resource(env, capacity=n)
    blocked = np.zeros(horizon_arrivals, dtype=bool)

    def serve(request: simpy.resources.resource.Request, duration: float):
        yield env.timeout(duration)
        servers.release(request)

    def arrivals():
        for i in range(horizon_arrivals):
            yield env.timeout(gaps[i])
            if servers.count >= n:
                blocked[i] = True
                continue
            env.process(serve(servers.request(), durations[i]))

    env.process(arrivals())
    env.run()

    observed = blocked[int(warmup * horizon_arrivals):]
    means = np.array([batch.mean() for batch in np.array_split(observed, batches)])
    z = norm.ppf(0.5 + CONFIDENCE / 2)
    half_width = float(z * means.std(ddof=1) / math.sqrt(batches))

    # no spread to estimate from when nothing or everything was blocked
    if observed.sum() in (0, observed.size):
        half_width = max(half_width, RULE_OF_THREE / observed.size)

    return SimEstimate(
        blocked_fraction=float(observed.mean()),
        half_width_95=half_width,
        arrivals_observed=int(observed.size),
    )


def validate_we(
        spec: SystemSpec,
        p: Partition,
        horizon: int,
        seed: int,
        *,
        perturbation: Optional[dict[int, float]] = None,
        service: ServiceLaw = ServiceLaw.EXPONENTIAL
) -> tuple[BlockValidation, ...]:
    """
    Simulates every block of the equilibrium split on its own stream and checks that each
    interval covers the common blocking probability.

    Parameters
    ----------
        spec : :class:`concord.objects.SystemSpec`
            The market.
        p : :class:`concord.objects.Partition`
            The partition to check.
        horizon : int
            Arrivals per block.
        seed : int
            Root seed; every block gets an independent child stream.
        perturbation : Optional[dict[int, float]]
            Relative change of the rate fed to the block at a given position, e.g.
            ``{0: 0.1}`` feeds the first block 10% more than its equilibrium rate.
        service : :class:`concord.enums.ServiceLaw`
            Service time law.

    Returns
    -------
        tuple[:class:`concord.objects.BlockValidation`, ...]
    """
    perturbation = perturbation or {}
    equilibrium = wardrop_split(spec, p)
    children = np.random.SeedSequence(seed).spawn(len(equilibrium.blocks))

    report = []
    for index, (block, rate, child) in enumerate(zip(equilibrium.blocks, equilibrium.rates, children)):
        fed = rate * (1 + perturbation.get(index, 0.0))
        servers = block.servers(spec)
        estimate = simulate_loss(servers, fed, spec.service_rate, horizon, child, service=service)
        check = BlockValidation(block, servers, fed, equilibrium.common_blocking, estimate)
        if not check.covered:
            logger.debug(
                f"Block {block} blocked {estimate.blocked_fraction:.5f} +- {estimate.half_width_95:.5f}, "
                f"expected {equilibrium.common_blocking:.5f}"
            )
        report.append(check)

    return tuple(report)
