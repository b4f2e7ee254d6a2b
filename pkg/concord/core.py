from __future__ import annotations

from typing import Iterator

import numpy as np

from concord.exceptions import CoverageError, InvalidData, OverlapError
from concord.objects import CoalitionSet, Partition, SystemSpec
from concord.utils import MAX_ENUMERATION_AGENTS, bits, restricted_growth_strings

__all__ = (
    "validate_partition",
    "enumerate_partitions",
    "enumerate_partitions_containing",
    "random_partition",
)


def validate_partition(spec: SystemSpec, partition: Partition) -> Partition:
    """
    Checks that the blocks of ``partition`` are disjoint and cover every agent of ``spec``.

    Parameters
    ----------
        spec : :class:`concord.objects.SystemSpec`
            The system the partition should cover.
        partition : :class:`concord.objects.Partition`
            The partition to check.

    Raises
    ------
        OverlapError
            If two blocks share an agent.
        CoverageError
            If an agent belongs to no block.
        InvalidData
            If a block names an agent the system does not have.

    Returns
    -------
        :class:`concord.objects.Partition`
            The partition in canonical block order.
    """
    if partition.n != spec.n:
        raise InvalidData(f"Partition over {partition.n} agents used with a system of {spec.n}")

    seen = 0
    for block in partition:
        if block.mask & ~spec.full_mask:
            raise InvalidData(f"Block {block} names an agent outside 0..{spec.n - 1}")

        shared = seen & block.mask
        if shared:
            raise OverlapError(bits(shared)[0])
        seen |= block.mask

    missing = spec.full_mask & ~seen
    if missing:
        raise CoverageError(bits(missing)[0])

    return Partition(partition.blocks, spec.n)


def enumerate_partitions(n: int, *, limit: int = MAX_ENUMERATION_AGENTS) -> Iterator[Partition]:
    """
    Yields every set partition of ``n`` agents once, in restricted growth string order.

    Raises
    ------
        SizeLimitError
            If ``n`` exceeds ``limit``.
    """
    for rgs in restricted_growth_strings(n, limit=limit):
        yield Partition.from_rgs(rgs)


def enumerate_partitions_containing(
        n: int,
        block: CoalitionSet,
        *,
        limit: int = MAX_ENUMERATION_AGENTS
) -> Iterator[Partition]:
    """
    Yields every partition of ``n`` agents having ``block`` as one of its blocks.

    These are the partitions of the complement of ``block``, each extended with ``block``.

    Parameters
    ----------
        n : int
            Number of agents.
        block : :class:`concord.objects.CoalitionSet`
            The block every yielded partition contains.
        limit : int
            Largest complement size enumerated.

    Raises
    ------
        InvalidData
            If ``block`` is empty or names an agent outside ``0..n-1``.
        SizeLimitError
            If the complement exceeds ``limit`` agents.

    Returns
    -------
        Iterator[:class:`concord.objects.Partition`]
    """
    full = CoalitionSet.everyone(n)
    if not block or not block <= full:
        raise InvalidData(f"{block} is not a non-empty coalition of {n} agents")

    rest = (full - block).members
    if not rest:
        yield Partition([block], n)
        return

    for rgs in restricted_growth_strings(len(rest), limit=limit):
        masks: dict[int, int] = {}
        for position, label in enumerate(rgs):
            masks[label] = masks.get(label, 0) | 1 << rest[position]
        yield Partition([block, *(CoalitionSet(mask) for mask in masks.values())], n)


def random_partition(n: int, rng: np.random.Generator | int) -> Partition:
    """A partition where every agent independently picks one of ``n`` labels."""
    rng = np.random.default_rng(rng)
    return Partition.from_rgs([int(label) for label in rng.integers(0, n, size=n)])
