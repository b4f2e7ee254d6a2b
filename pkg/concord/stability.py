from __future__ import annotations

import math
from typing import Iterator, Optional

import numpy as np
from loguru import logger

from concord.core import enumerate_partitions, enumerate_partitions_containing, validate_partition
from concord.enums import MoveKind, PessimalMode, StabilityRule
from concord.exceptions import InvalidData, NotStableError, SizeLimitError, WitnessVerificationError
from concord.objects import (
    BlockWitness,
    CoalitionSet,
    Configuration,
    KStarResult,
    Partition,
    PayoffVector,
    PsiPoint,
    ScanRow,
    StabilityReport,
    StabilityVerdict,
    SystemSpec,
    WardropResult,
)
from concord.utils import all_masks, submasks, subset_sums
from concord.wardrop import psi, wardrop_split

__all__ = (
    "pessimal_rate",
    "proportional_payoff",
    "random_payoff",
    "configure",
    "candidate_moves",
    "blocks_config",
    "is_stable",
    "k_star",
    "optimal_coalitions",
    "stable_set_scan",
    "gc_analysis",
    "rb_pa_stability_radius",
    "fragility_witness",
)

ORACLE_LIMIT = 10
SCAN_LIMIT = 10
TIE_TOLERANCE = 1e-9
GC_MARGIN = 1e-6


def pessimal_rate(spec: SystemSpec, q: CoalitionSet, mode: PessimalMode = PessimalMode.FAST) -> float:
    """
    The least equilibrium rate coalition ``q`` can get over all partitions containing it.

    Parameters
    ----------
        spec : :class:`concord.objects.SystemSpec`
            The market.
        q : :class:`concord.objects.CoalitionSet`
            Non-empty coalition.
        mode : :class:`concord.enums.PessimalMode`
            ``FAST`` solves the single partition where every outsider has merged,
            ``ORACLE`` takes the minimum over every partition of the outsiders.

    Raises
    ------
        InvalidData
            If ``q`` is empty or names unknown agents.
        SizeLimitError
            In oracle mode, if more than ten agents are outside ``q``.

    Returns
    -------
        float
    """
    everyone = CoalitionSet(spec.full_mask)
    if not q or not q <= everyone:
        raise InvalidData(f"{q} is not a non-empty coalition of {spec.n} agents")

    if q == everyone:
        return spec.total_rate

    if mode is PessimalMode.FAST:
        return wardrop_split(spec, Partition([q, everyone - q], spec.n), validate=False).rate_of(q)

    outside = spec.n - len(q)
    if outside > ORACLE_LIMIT:
        raise SizeLimitError("Pessimistic value enumeration", outside, ORACLE_LIMIT)

    return min(
        wardrop_split(spec, partition, validate=False).rate_of(q)
        for partition in enumerate_partitions_containing(spec.n, q, limit=ORACLE_LIMIT)
    )


def proportional_payoff(
        spec: SystemSpec,
        partition: Partition,
        equilibrium: Optional[WardropResult] = None
) -> PayoffVector:
    """
    Splits each block's equilibrium rate among its members in proportion to their servers.

    Parameters
    ----------
        spec : :class:`concord.objects.SystemSpec`
            The market.
        partition : :class:`concord.objects.Partition`
            A valid partition.
        equilibrium : Optional[:class:`concord.objects.WardropResult`]
            Its equilibrium, solved when not given.

    Returns
    -------
        :class:`concord.objects.PayoffVector`
    """
    if equilibrium is None:
        equilibrium = wardrop_split(spec, partition)

    values = [0.0] * spec.n
    for block, rate in zip(equilibrium.blocks, equilibrium.rates):
        servers = block.servers(spec)
        for i in block:
            values[i] = spec.server_counts[i] / servers * rate
    return PayoffVector(values)


def random_payoff(
        spec: SystemSpec,
        partition: Partition,
        rng: np.random.Generator | int,
        equilibrium: Optional[WardropResult] = None
) -> PayoffVector:
    """
    A consistent payoff splitting every block's rate by a flat Dirichlet draw.
    """
    rng = np.random.default_rng(rng)
    if equilibrium is None:
        equilibrium = wardrop_split(spec, partition)

    values = [0.0] * spec.n
    for block, rate in zip(equilibrium.blocks, equilibrium.rates):
        members = block.members
        shares = rng.dirichlet(np.ones(len(members)))
        for i, share in zip(members, shares):
            values[i] = float(share) * rate
    return PayoffVector(values)


def configure(spec: SystemSpec, partition: Partition, payoff: Optional[PayoffVector] = None) -> Configuration:
    """
    Builds a checked configuration, with the proportional payoff unless one is given.

    Raises
    ------
        OverlapError
            If two blocks share an agent.
        CoverageError
            If an agent is left out.
        InconsistentPayoffError
            If ``payoff`` does not reproduce the equilibrium block rates.
    """
    partition = validate_partition(spec, partition)
    equilibrium = wardrop_split(spec, partition, validate=False)
    if payoff is None:
        payoff = proportional_payoff(spec, partition, equilibrium)
    return Configuration(partition, payoff, equilibrium, tolerance=spec.tol_feas)


def candidate_moves(partition: Partition, rule: StabilityRule) -> Iterator[tuple[CoalitionSet, MoveKind]]:
    """
    Yields the coalitions allowed to block under ``rule``, each once.

    Restricted rules yield every union of two or more blocks first, ordered by the set of
    blocks merged, then every proper non-empty subset of each block, block by block. The
    general rule yields every coalition that is not a block, in bitmask order, labelled by how
    it relates to the partition.

    Parameters
    ----------
        partition : :class:`concord.objects.Partition`
            A valid partition.
        rule : :class:`concord.enums.StabilityRule`
            The blocking rule.

    Returns
    -------
        Iterator[tuple[:class:`concord.objects.CoalitionSet`, :class:`concord.enums.MoveKind`]]
    """
    blocks = partition.blocks

    if rule.restricted:
        for chosen in range(1, 1 << len(blocks)):
            if chosen.bit_count() < 2:
                continue
            mask = 0
            for index, block in enumerate(blocks):
                if chosen >> index & 1:
                    mask |= block.mask
            yield CoalitionSet(mask), MoveKind.MERGER

        for block in blocks:
            for mask in submasks(block.mask):
                yield CoalitionSet(mask), MoveKind.SPLIT
        return

    existing = {block.mask for block in blocks}
    for mask in all_masks(partition.n):
        if mask in existing:
            continue
        yield CoalitionSet(mask), _kind_of(partition, mask)


def _kind_of(partition: Partition, mask: int) -> MoveKind:
    touched = [block for block in partition if block.mask & mask]
    if len(touched) == 1:
        return MoveKind.SPLIT
    if all(block.mask & ~mask == 0 for block in touched):
        return MoveKind.MERGER
    return MoveKind.GENERAL


def _evaluate(
        spec: SystemSpec,
        cfg: Configuration,
        q: CoalitionSet,
        kind: MoveKind,
        rule: StabilityRule,
        mode: PessimalMode
) -> tuple[Optional[BlockWitness], bool]:
    """The witness if ``q`` blocks, and whether the payoff could matter for that answer."""
    tol = spec.tol_feas
    held = cfg.payoff.total(q)
    anticipated = pessimal_rate(spec, q, mode)

    if not rule.restricted or rule is StabilityRule.RB_PA:
        source = cfg.partition.block_of(q.smallest) if kind is MoveKind.SPLIT else None
        if anticipated > held + tol:
            return BlockWitness(q, kind, anticipated, held, source), True
        return None, True

    if kind is MoveKind.MERGER:
        merged = sum(rate for block, rate in zip(cfg.equilibrium.blocks, cfg.equilibrium.rates) if block <= q)
        if anticipated > merged + tol:
            return BlockWitness(q, kind, anticipated, merged), False
        return None, False

    if kind is not MoveKind.SPLIT:
        raise InvalidData(f"{rule.value} only knows mergers and splits, got {kind.value}")

    source = cfg.partition.block_of(q.smallest)
    estimate = q.servers(spec) / source.servers(spec) * cfg.equilibrium.rate_of(source)
    if not anticipated > estimate + tol:
        return None, False

    after = wardrop_split(spec, cfg.partition.split(source, q), validate=False).rate_of(q)
    if after > held + tol:
        return BlockWitness(q, kind, after, held, source), True
    return None, True


def blocks_config(
        spec: SystemSpec,
        cfg: Configuration,
        q: CoalitionSet,
        kind: MoveKind,
        rule: StabilityRule,
        mode: PessimalMode = PessimalMode.FAST
) -> Optional[BlockWitness]:
    """
    Tests whether ``q`` blocks ``cfg`` under ``rule``.

    With perfect anticipation ``q`` blocks when its pessimistic rate exceeds what its members
    hold. With imperfect anticipation a merger compares the pessimistic rate with the summed
    rates of the merged blocks, and a split of block ``C`` must both expect more than its
    server share of ``C`` and actually earn more than its members hold in the partition
    where it has broken away. Every comparison is strict with a margin of the feasibility
    tolerance.

    Parameters
    ----------
        spec : :class:`concord.objects.SystemSpec`
            The market.
        cfg : :class:`concord.objects.Configuration`
            The prevailing configuration.
        q : :class:`concord.objects.CoalitionSet`
            Candidate from :func:`candidate_moves`.
        kind : :class:`concord.enums.MoveKind`
            How ``q`` relates to the partition.
        rule : :class:`concord.enums.StabilityRule`
            The blocking rule.
        mode : :class:`concord.enums.PessimalMode`
            How pessimistic rates are found.

    Returns
    -------
        Optional[:class:`concord.objects.BlockWitness`]
    """
    witness, _ = _evaluate(spec, cfg, q, kind, rule, mode)
    return witness


def is_stable(
        spec: SystemSpec,
        cfg: Configuration,
        rule: StabilityRule,
        mode: PessimalMode = PessimalMode.FAST
) -> StabilityVerdict:
    """
    Scans every candidate move and reports the first blocker in candidate order.

    Under imperfect anticipation the verdict is flagged payoff independent when it was
    decided by a merger, or when no split even expected to gain.

    Raises
    ------
        SizeLimitError
            In oracle mode, for too many agents.

    Returns
    -------
        :class:`concord.objects.StabilityVerdict`
    """
    dependent = rule is not StabilityRule.RB_IA

    for q, kind in candidate_moves(cfg.partition, rule):
        witness, payoff_matters = _evaluate(spec, cfg, q, kind, rule, mode)
        dependent = dependent or payoff_matters
        if witness is not None:
            return StabilityVerdict(
                stable=False,
                rule=rule,
                witness=witness,
                payoff_dependent=rule is not StabilityRule.RB_IA or kind is not MoveKind.MERGER,
            )

    return StabilityVerdict(stable=True, rule=rule, payoff_dependent=dependent)


def k_star(spec: SystemSpec) -> KStarResult:
    """
    Finds the coalition sizes above half the market with the highest per-server rate.

    Every proper subset sum ``k`` with ``N / 2 < k < N`` is evaluated; the maximizers are the
    sizes within ``1e-9`` times the total rate of the best. An equal-halves split, when
    achievable, is reported separately and never counted as a maximizer.

    Parameters
    ----------
        spec : :class:`concord.objects.SystemSpec`
            The market.

    Returns
    -------
        :class:`concord.objects.KStarResult`
    """
    total = spec.total_servers
    sums = subset_sums(spec.server_counts)
    achievable = tuple(sorted(k for k in sums if total < 2 * k < 2 * total))

    half = None
    if total % 2 == 0 and total // 2 in sums:
        half = PsiPoint(k=total // 2, psi=spec.total_rate / total, lambda_k=spec.total_rate / 2)

    points = tuple(psi(spec, k) for k in achievable)
    if not points:
        return KStarResult(maximizers=(), psi_max=math.nan, achievable_ks=(), points=(), half_split=half)

    best = max(point.psi for point in points)
    tie = TIE_TOLERANCE * spec.total_rate
    maximizers = tuple(point.k for point in points if point.psi >= best - tie)

    logger.debug(f"Optimal sizes at rate {spec.total_rate}: {maximizers} out of {achievable}")
    return KStarResult(maximizers=maximizers, psi_max=best, achievable_ks=achievable, points=points, half_split=half)


def optimal_coalitions(spec: SystemSpec, kstar: Optional[KStarResult] = None) -> tuple[CoalitionSet, ...]:
    """Proper coalitions whose size is an optimal size, in bitmask order."""
    if kstar is None:
        kstar = k_star(spec)

    sizes = set(kstar.maximizers)
    return tuple(
        CoalitionSet(mask)
        for mask in all_masks(spec.n)
        if mask != spec.full_mask and spec.servers(mask) in sizes
    )


def stable_set_scan(
        spec: SystemSpec,
        rule: StabilityRule,
        mode: PessimalMode = PessimalMode.FAST,
        *,
        limit: int = SCAN_LIMIT
) -> StabilityReport:
    """
    Classifies every partition of the market under ``rule`` at the proportional payoff.

    Under imperfect anticipation, rows whose verdict could change with the payoff are
    flagged ``payoff_dependent`` on their verdict.

    Raises
    ------
        SizeLimitError
            If the market has more than ``limit`` agents.

    Returns
    -------
        :class:`concord.objects.StabilityReport`
    """
    if spec.n > limit:
        raise SizeLimitError("Stability scan", spec.n, limit)

    rows = []
    for partition in enumerate_partitions(spec.n, limit=limit):
        verdict = is_stable(spec, configure(spec, partition), rule, mode)
        logger.debug(f"{rule.value} {partition.rgs_string}: {'stable' if verdict.stable else 'blocked'}")
        rows.append(ScanRow(partition, verdict))

    return StabilityReport(rule=rule, rows=tuple(rows))


def gc_analysis(spec: SystemSpec, mode: PessimalMode = PessimalMode.FAST) -> Optional[PayoffVector]:
    """
    Builds a payoff under which the grand coalition resists every split, if one exists.

    Such a payoff exists exactly when the largest agent holds more servers than all others
    together. The largest agent then receives the best pessimistic rate among the splits
    containing it that expect to gain, plus a margin of ``1e-6`` times the total rate, and
    the rest is shared equally.

    Raises
    ------
        WitnessVerificationError
            If the constructed payoff is blocked after all.

    Returns
    -------
        Optional[:class:`concord.objects.PayoffVector`]
    """
    counts = spec.server_counts
    if counts[0] <= sum(counts[1:]):
        return None

    total, rate = spec.total_servers, spec.total_rate
    best = counts[0] / total * rate
    for mask in all_masks(spec.n):
        if not mask & 1 or mask == spec.full_mask:
            continue
        coalition = CoalitionSet(mask)
        if pessimal_rate(spec, coalition, mode) > spec.servers(mask) / total * rate + spec.tol_feas:
            # breaking away from the grand coalition leaves exactly the merged rest outside
            after = pessimal_rate(spec, coalition, PessimalMode.FAST)
            best = max(best, after + GC_MARGIN * rate)

    leader = min(rate, best)
    others = spec.n - 1
    payoff = PayoffVector([leader] + [(rate - leader) / others] * others) if others else PayoffVector([rate])

    verdict = is_stable(spec, configure(spec, Partition.grand(spec.n), payoff), StabilityRule.RB_IA, mode)
    if not verdict.stable:
        raise WitnessVerificationError(f"Grand coalition payoff {payoff!r} is blocked by {verdict.witness!r}")
    return payoff


def rb_pa_stability_radius(
        spec: SystemSpec,
        partition: Partition,
        phi: PayoffVector,
        mode: PessimalMode = PessimalMode.FAST
) -> float:
    """
    Sup-norm radius around ``phi`` within which consistent payoffs stay unblocked with perfect
    anticipation.

    The radius is the least per-member slack ``(sum_q phi - pessimistic rate of q) / |q|`` over
    every merger and split except the whole market, whose slack is zero for any consistent
    payoff.

    Raises
    ------
        NotStableError
            If some candidate already blocks.
        InconsistentPayoffError
            If ``phi`` does not match the partition's equilibrium.

    Returns
    -------
        float
            Non-negative, ``inf`` when there is no candidate.
    """
    cfg = configure(spec, partition, phi)
    radius = math.inf

    for q, _ in candidate_moves(cfg.partition, StabilityRule.RB_PA):
        if q.mask == spec.full_mask:
            continue
        slack = cfg.payoff.total(q) - pessimal_rate(spec, q, mode)
        if slack < -spec.tol_feas:
            raise NotStableError(f"{q} blocks with a margin of {-slack:.3e}")
        radius = min(radius, max(slack, 0.0) / len(q))

    return radius


def fragility_witness(
        spec: SystemSpec,
        mode: PessimalMode = PessimalMode.FAST
) -> Optional[tuple[Configuration, BlockWitness]]:
    """
    Finds an optimal duopoly at the proportional payoff that a general coalition breaks.

    Looks for an optimal coalition ``C`` and a part ``S`` of it such that ``S`` together with
    everyone outside ``C`` is again optimal; that coalition blocks once any coalition may form.

    Raises
    ------
        WitnessVerificationError
            If the constructed coalition does not block.

    Returns
    -------
        Optional[tuple[:class:`concord.objects.Configuration`, :class:`concord.objects.BlockWitness`]]
            The duopoly configuration and the blocker, ``None`` when no such pair exists.
    """
    kstar = k_star(spec)
    sizes = set(kstar.maximizers)
    everyone = CoalitionSet(spec.full_mask)

    for coalition in optimal_coalitions(spec, kstar):
        rest = everyone - coalition
        for mask in submasks(coalition.mask):
            challenger = CoalitionSet(mask) | rest
            if challenger.servers(spec) not in sizes:
                continue

            cfg = configure(spec, Partition([coalition, rest], spec.n))
            witness = blocks_config(spec, cfg, challenger, MoveKind.GENERAL, StabilityRule.GB_PA, mode)
            if witness is None:
                raise WitnessVerificationError(f"{challenger} does not block the duopoly {cfg!r}")

            logger.debug(f"Duopoly {cfg.partition.to_string()} is broken by {challenger}")
            return cfg, witness

    return None
