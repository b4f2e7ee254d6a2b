from __future__ import annotations

import string
from typing import TYPE_CHECKING, Iterable, Iterator, Optional, Sequence

from concord.exceptions import InvalidData
from concord.objects.coalition import CoalitionSet

if TYPE_CHECKING:
    from concord.objects.system_spec import SystemSpec

__all__ = (
    "Partition",
)

_RGS_DIGITS = string.digits + string.ascii_lowercase


class Partition:
    """
    Represents an arrangement of agents into coalitions.

    Blocks are kept sorted by their smallest member, which makes iteration order, equality and
    hashing independent of how the partition was written down. Disjointness and coverage are
    checked by :func:`concord.validate_partition`, not here, so invalid inputs can be reported
    precisely.

    Operations
    ----------
        .. describe:: len(x)

            Returns the number of blocks.

        .. describe:: for block in x

            Iterates the blocks in canonical order.

        .. describe:: x[i]

            Returns the ``i``-th block.

        .. describe:: c in x

            Checks if coalition ``c`` is one of the blocks.

        .. describe:: x == y

            Checks if two partitions have the same blocks.

        .. describe:: hash(x)

            Return the partition's hash, derived from its restricted growth string.

    Attributes
    ----------
        n : int
            Number of agents.
        blocks : tuple[:class:`concord.objects.CoalitionSet`, ...]
            Blocks in canonical order.
    """

    __slots__ = ('_n', '_blocks')

    def __init__(self, blocks: Iterable[CoalitionSet], n: int) -> None:
        blocks = [block for block in blocks]
        if any(not block for block in blocks):
            raise InvalidData("Partition blocks must be non-empty")

        self._n: int = n
        self._blocks: tuple[CoalitionSet, ...] = tuple(sorted(blocks, key=lambda block: block.smallest))

    @classmethod
    def from_masks(cls, masks: Iterable[int], n: int) -> Partition:
        return cls((CoalitionSet(mask) for mask in masks), n)

    @classmethod
    def from_rgs(cls, rgs: Sequence[int]) -> Partition:
        masks: dict[int, int] = {}
        for agent, block in enumerate(rgs):
            masks[block] = masks.get(block, 0) | 1 << agent
        return cls.from_masks(masks.values(), len(rgs))

    @classmethod
    def grand(cls, n: int) -> Partition:
        return cls([CoalitionSet.everyone(n)], n)

    @classmethod
    def singletons(cls, n: int) -> Partition:
        return cls.from_masks((1 << i for i in range(n)), n)

    @classmethod
    def from_string(cls, text: str, n: int, spec: Optional[SystemSpec] = None) -> Partition:
        """
        Parses the ``"0,1|2|3,4"`` syntax.

        Parameters
        ----------
            text : str
                Blocks separated by ``|``, agents within a block by ``,``.
            n : int
                Number of agents.
            spec : Optional[:class:`concord.objects.SystemSpec`]
                When given, indices are read in the caller's original order and mapped to
                canonical indices.

        Raises
        ------
            InvalidData
                If the text is malformed or names an unknown agent.

        Returns
        -------
            Partition
        """
        blocks = []
        for chunk in text.strip().split('|'):
            members = []
            for token in chunk.split(','):
                token = token.strip()
                if not token:
                    raise InvalidData(f"Empty agent index in partition {text!r}")
                try:
                    agent = int(token)
                except ValueError as error:
                    raise InvalidData(f"Agent index {token!r} is not an integer") from error

                if spec is not None:
                    agent = spec.canonical_index(agent)
                elif not 0 <= agent < n:
                    raise InvalidData(f"Unknown agent {agent} (system has {n} agents)")

                if agent in members:
                    raise InvalidData(f"Agent {agent} repeated inside block {chunk!r}")
                members.append(agent)
            blocks.append(CoalitionSet.of(members))

        return cls(blocks, n)

    @property
    def n(self) -> int:
        return self._n

    @property
    def blocks(self) -> tuple[CoalitionSet, ...]:
        return self._blocks

    @property
    def rgs(self) -> tuple[int, ...]:
        """Restricted growth string: ``rgs[i]`` is the block index of agent ``i``."""
        out = [-1] * self._n
        for index, block in enumerate(self._blocks):
            for agent in block:
                if agent < self._n:
                    out[agent] = index
        return tuple(out)

    @property
    def rgs_string(self) -> str:
        return ''.join(_RGS_DIGITS[i] if 0 <= i < len(_RGS_DIGITS) else '?' for i in self.rgs)

    def to_string(self, labels: Optional[tuple[int, ...]] = None) -> str:
        """
        Renders the partition in the ``"0,1|2"`` syntax, optionally with original labels.
        """
        rendered = []
        for block in self._blocks:
            members = block.labelled(labels) if labels is not None else block.members
            rendered.append(','.join(map(str, members)))
        return '|'.join(sorted(rendered, key=lambda chunk: int(chunk.split(',')[0])))

    def block_of(self, agent: int) -> CoalitionSet:
        for block in self._blocks:
            if agent in block:
                return block
        raise KeyError(f"Agent {agent} is not in the partition")

    def index(self, block: CoalitionSet) -> int:
        return self._blocks.index(block)

    def merge(self, merged: Iterable[CoalitionSet]) -> Partition:
        """
        Returns the partition where ``merged`` blocks are replaced by their union.
        """
        merged = set(merged)
        union = CoalitionSet(0)
        for block in merged:
            union = union | block

        return Partition([b for b in self._blocks if b not in merged] + [union], self._n)

    def split(self, block: CoalitionSet, part: CoalitionSet) -> Partition:
        """
        Returns the partition where ``block`` is replaced by ``part`` and ``block - part``.
        """
        if not part < block:
            raise InvalidData(f"{part} is not a proper subset of {block}")

        return Partition([b for b in self._blocks if b != block] + [part, block - part], self._n)

    def __len__(self) -> int:
        return len(self._blocks)

    def __iter__(self) -> Iterator[CoalitionSet]:
        return iter(self._blocks)

    def __getitem__(self, index: int) -> CoalitionSet:
        return self._blocks[index]

    def __contains__(self, block: object) -> bool:
        return block in self._blocks

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Partition):
            return NotImplemented
        return self._n == other._n and self._blocks == other._blocks

    def __hash__(self) -> int:
        return hash(self.rgs)

    def __repr__(self) -> str:
        return f"<concord.objects.Partition blocks={self.to_string()} rgs={self.rgs_string}>"
