from __future__ import annotations

from typing import Optional

import numpy as np
from loguru import logger

from concord.abstract import PayoffRule
from concord.enums import MoveKind, PessimalMode, StabilityRule, Terminal
from concord.exceptions import InvalidData, SizeLimitError
from concord.objects import (
    A1Report,
    BlockWitness,
    CoalitionSet,
    Configuration,
    DynamicsTrace,
    EqualSurplus,
    SystemSpec,
    TraceStep,
)
from concord.stability import blocks_config, candidate_moves, k_star, optimal_coalitions, pessimal_rate
from concord.utils import all_masks, submasks
from concord.wardrop import wardrop_split

__all__ = (
    "check_a1",
    "step",
    "run",
)

A1_LIMIT = 10
DEFAULT_MAX_STEPS = 10_000
QUANTUM = 1e-9


def check_a1(spec: SystemSpec, mode: PessimalMode = PessimalMode.FAST, *, limit: int = A1_LIMIT) -> A1Report:
    """
    Checks that no coalition free of optimal coalitions has a part earning more per server.

    For every coalition ``C`` of two or more agents that contains no optimal coalition, every
    strict subset ``S`` must satisfy ``pess(S) / N_S < pess(C) / N_C``; ties count as
    violations, up to the feasibility tolerance spread over the market's servers.

    Raises
    ------
        SizeLimitError
            If the market has more than ``limit`` agents.

    Returns
    -------
        :class:`concord.objects.A1Report`
    """
    if spec.n > limit:
        raise SizeLimitError("Assumption check", spec.n, limit)

    optimal = [c.mask for c in optimal_coalitions(spec, k_star(spec))]
    per_server = {mask: pessimal_rate(spec, CoalitionSet(mask), mode) / spec.servers(mask) for mask in all_masks(spec.n)}
    tol = spec.tol_feas / spec.total_servers

    checked = 0
    for mask in all_masks(spec.n):
        if mask.bit_count() < 2 or any(opt & ~mask == 0 for opt in optimal):
            continue
        checked += 1
        for sub in submasks(mask):
            if per_server[sub] >= per_server[mask] - tol:
                logger.debug(f"Assumption fails for {CoalitionSet(mask)} with part {CoalitionSet(sub)}")
                return A1Report(holds=False, counterexample=(CoalitionSet(mask), CoalitionSet(sub)), checked=checked)

    return A1Report(holds=True, checked=checked)


def step(
        spec: SystemSpec,
        cfg: Configuration,
        rule: StabilityRule,
        rng: np.random.Generator,
        *,
        payoff_rule: Optional[PayoffRule] = None,
        mode: PessimalMode = PessimalMode.FAST
) -> Optional[tuple[Configuration, BlockWitness]]:
    """
    Lets one blocking coalition, drawn uniformly among all of them, form.

    Parameters
    ----------
        spec : :class:`concord.objects.SystemSpec`
            The market.
        cfg : :class:`concord.objects.Configuration`
            The prevailing configuration.
        rule : :class:`concord.enums.StabilityRule`
            ``RB_IA`` or ``RB_PA``.
        rng : :class:`numpy.random.Generator`
            Source of the draw.
        payoff_rule : Optional[:class:`concord.abstract.PayoffRule`]
            How payoffs are reassigned after the move, :class:`concord.objects.EqualSurplus`
            by default.
        mode : :class:`concord.enums.PessimalMode`
            How pessimistic rates are found.

    Raises
    ------
        InvalidData
            If ``rule`` is not a restricted rule.

    Returns
    -------
        Optional[tuple[:class:`concord.objects.Configuration`, :class:`concord.objects.BlockWitness`]]
            ``None`` when the configuration is stable, otherwise the new configuration and
            the coalition that formed.
    """
    if not rule.restricted:
        raise InvalidData(f"Coalition formation runs under restricted rules, got {rule.value}")

    payoff_rule = payoff_rule or EqualSurplus()
    blockers = [
        witness
        for q, kind in candidate_moves(cfg.partition, rule)
        if (witness := blocks_config(spec, cfg, q, kind, rule, mode)) is not None
    ]
    if not blockers:
        return None

    chosen = blockers[int(rng.integers(len(blockers)))]
    blocker = chosen.blocker

    if chosen.kind is MoveKind.MERGER:
        partition = cfg.partition.merge(block for block in cfg.partition if block <= blocker)
    else:
        partition = cfg.partition.split(chosen.source, blocker)

    equilibrium = wardrop_split(spec, partition, validate=False)
    payoff = payoff_rule.reallocate(spec, cfg.payoff, partition, equilibrium, blocker)

    return Configuration(partition, payoff, equilibrium, tolerance=spec.tol_feas), chosen


def run(
        spec: SystemSpec,
        cfg0: Configuration,
        rule: StabilityRule,
        seed: int,
        max_steps: int = DEFAULT_MAX_STEPS,
        *,
        payoff_rule: Optional[PayoffRule] = None,
        mode: PessimalMode = PessimalMode.FAST
) -> DynamicsTrace:
    """
    Repeats :func:`step` until the configuration is stable, a state repeats or the step cap
    is reached.

    States are compared by partition and by payoffs rounded to ``1e-9`` times the total rate.
    The whole trace is a function of the arguments.

    Parameters
    ----------
        spec : :class:`concord.objects.SystemSpec`
            The market.
        cfg0 : :class:`concord.objects.Configuration`
            Starting configuration.
        rule : :class:`concord.enums.StabilityRule`
            ``RB_IA`` or ``RB_PA``.
        seed : int
            Seed of the generator drawing the blockers.
        max_steps : int
            Largest number of moves. Defaults to 10000.
        payoff_rule : Optional[:class:`concord.abstract.PayoffRule`]
            Payoff reassignment after each move.
        mode : :class:`concord.enums.PessimalMode`
            How pessimistic rates are found.

    Returns
    -------
        :class:`concord.objects.DynamicsTrace`
    """
    rng = np.random.default_rng(seed)
    quantum = QUANTUM * spec.total_rate

    cfg = cfg0
    seen = {(cfg.partition, cfg.payoff.quantized(quantum))}
    steps: list[TraceStep] = []

    while True:
        outcome = step(spec, cfg, rule, rng, payoff_rule=payoff_rule, mode=mode)
        if outcome is None:
            terminal = Terminal.STABLE
            break
        if len(steps) >= max_steps:
            terminal = Terminal.STEP_CAP_REACHED
            logger.warning(f"Coalition formation stopped after {max_steps} steps without settling")
            break

        new, witness = outcome
        steps.append(TraceStep(len(steps) + 1, new, witness, cfg.payoff.payoffs))
        cfg = new

        state = (cfg.partition, cfg.payoff.quantized(quantum))
        if state in seen:
            terminal = Terminal.CYCLING
            logger.warning(f"Coalition formation revisited {cfg.partition.to_string()} at step {len(steps)}")
            break
        seen.add(state)

    logger.info(
        f"Trace seed={seed} rule={rule.value}: {terminal.value} after {len(steps)} steps "
        f"at {cfg.partition.to_string(spec.labels)}"
    )
    return DynamicsTrace(initial=cfg0, steps=tuple(steps), terminal=terminal, seed=seed, rule=rule)
