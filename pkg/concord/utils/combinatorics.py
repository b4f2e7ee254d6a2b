from __future__ import annotations

from typing import Iterable, Iterator, Sequence

from concord.exceptions import SizeLimitError

__all__ = (
    "MAX_ENUMERATION_AGENTS",
    "all_masks",
    "bell_number",
    "bits",
    "mask_of",
    "restricted_growth_strings",
    "submasks",
    "subset_sums",
)

MAX_ENUMERATION_AGENTS = 12


def bits(mask: int) -> tuple[int, ...]:
    """Indices of the set bits of ``mask``, ascending."""
    out = []
    index = 0
    while mask:
        if mask & 1:
            out.append(index)
        mask >>= 1
        index += 1
    return tuple(out)


def mask_of(members: Iterable[int]) -> int:
    mask = 0
    for member in members:
        if member < 0:
            raise ValueError(f"Agent index must be non-negative, got {member}")
        mask |= 1 << member
    return mask


def all_masks(n: int) -> range:
    """Every non-empty subset of ``n`` agents as a bitmask, in increasing numeric order."""
    return range(1, 1 << n)


def submasks(mask: int, *, proper: bool = True) -> list[int]:
    """
    Non-empty submasks of ``mask`` in increasing numeric order.

    Parameters
    ----------
        mask : int
            The enclosing set.
        proper : bool
            Whether to exclude ``mask`` itself. Defaults to True.

    Returns
    -------
        list[int]
    """
    out = []
    sub = mask
    while sub:
        if not proper or sub != mask:
            out.append(sub)
        sub = (sub - 1) & mask
    out.reverse()
    return out


def subset_sums(counts: Sequence[int]) -> dict[int, list[int]]:
    """
    Maps every achievable sum of a non-empty subset of ``counts`` to the masks realising it.

    Parameters
    ----------
        counts : Sequence[int]
            Per-agent server counts.

    Returns
    -------
        dict[int, list[int]]
    """
    sums: dict[int, list[int]] = {}
    for mask in all_masks(len(counts)):
        total = sum(counts[i] for i in bits(mask))
        sums.setdefault(total, []).append(mask)
    return sums


def bell_number(n: int) -> int:
    """
    Number of set partitions of ``n`` elements, from the Bell triangle.

    Parameters
    ----------
        n : int
            Set size, non-negative.

    Returns
    -------
        int
    """
    if n < 0:
        raise ValueError("Bell numbers are defined for n >= 0")

    row = [1]
    for _ in range(n):
        nxt = [row[-1]]
        for value in row:
            nxt.append(nxt[-1] + value)
        row = nxt
    return row[0]


def restricted_growth_strings(n: int, *, limit: int = MAX_ENUMERATION_AGENTS) -> Iterator[tuple[int, ...]]:
    """
    Yields the restricted growth strings of length ``n`` in lexicographic order.

    A string ``a`` satisfies ``a[0] == 0`` and ``a[i] <= 1 + max(a[:i])``; each one encodes a
    set partition by sending element ``i`` to block ``a[i]``.

    Parameters
    ----------
        n : int
            Number of elements, between 1 and ``limit``.
        limit : int
            Guard against Bell-number blow up.

    Raises
    ------
        SizeLimitError
            If ``n`` exceeds ``limit``.
        ValueError
            If ``n`` is not positive.

    Returns
    -------
        Iterator[tuple[int, ...]]
    """
    if n > limit:
        raise SizeLimitError("Partition enumeration", n, limit)
    if n < 1:
        raise ValueError("Partition enumeration needs at least one element")

    current = [0] * n
    # prefix_max[i] is max(current[:i + 1])
    prefix_max = [0] * n

    while True:
        yield tuple(current)

        i = n - 1
        while i > 0 and current[i] > prefix_max[i - 1]:
            i -= 1
        if i == 0:
            return

        current[i] += 1
        prefix_max[i] = max(prefix_max[i - 1], current[i])
        for j in range(i + 1, n):
            current[j] = 0
            prefix_max[j] = prefix_max[i]
