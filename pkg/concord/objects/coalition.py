from __future__ import annotations

from typing import TYPE_CHECKING, Iterable, Iterator

from concord.utils import bits, mask_of

if TYPE_CHECKING:
    from concord.objects.system_spec import SystemSpec

__all__ = (
    "CoalitionSet",
)


class CoalitionSet:
    """
    Represents a set of agents, stored as a bitmask over canonical agent indices.

    Operations
    ----------
        .. describe:: len(x)

            Returns the number of members.

        .. describe:: i in x

            Checks if agent ``i`` is a member.

        .. describe:: for i in x

            Iterates the members in increasing order.

        .. describe:: x | y, x & y, x - y

            Set union, intersection and difference.

        .. describe:: x <= y, x < y

            Subset and strict subset tests.

        .. describe:: hash(x)

            Return the coalition's hash.

    Attributes
    ----------
        mask : int
            The membership bitmask.
    """

    __slots__ = ('_mask',)

    def __init__(self, mask: int) -> None:
        if mask < 0:
            raise ValueError("Coalition masks are non-negative")
        self._mask: int = mask

    @classmethod
    def of(cls, members: Iterable[int]) -> CoalitionSet:
        return cls(mask_of(members))

    @classmethod
    def everyone(cls, n: int) -> CoalitionSet:
        return cls((1 << n) - 1)

    @property
    def mask(self) -> int:
        return self._mask

    @property
    def members(self) -> tuple[int, ...]:
        return bits(self._mask)

    @property
    def smallest(self) -> int:
        if not self._mask:
            raise ValueError("The empty coalition has no smallest member")
        return (self._mask & -self._mask).bit_length() - 1

    def servers(self, spec: SystemSpec) -> int:
        """
        Pooled server count ``N_C``; recomputed on every call.

        Parameters
        ----------
            spec : :class:`concord.objects.SystemSpec`
                The system the agents belong to.

        Returns
        -------
            int
        """
        return spec.servers(self._mask)

    def labelled(self, labels: tuple[int, ...]) -> tuple[int, ...]:
        return tuple(sorted(labels[i] for i in self.members))

    def __len__(self) -> int:
        return self._mask.bit_count()

    def __bool__(self) -> bool:
        return self._mask != 0

    def __contains__(self, agent: int) -> bool:
        return agent >= 0 and bool(self._mask >> agent & 1)

    def __iter__(self) -> Iterator[int]:
        return iter(self.members)

    def __or__(self, other: CoalitionSet) -> CoalitionSet:
        return CoalitionSet(self._mask | other._mask)

    def __and__(self, other: CoalitionSet) -> CoalitionSet:
        return CoalitionSet(self._mask & other._mask)

    def __sub__(self, other: CoalitionSet) -> CoalitionSet:
        return CoalitionSet(self._mask & ~other._mask)

    def __le__(self, other: CoalitionSet) -> bool:
        return self._mask & ~other._mask == 0

    def __lt__(self, other: CoalitionSet) -> bool:
        return self <= other and self._mask != other._mask

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CoalitionSet):
            return NotImplemented
        return self._mask == other._mask

    def __hash__(self) -> int:
        return hash(self._mask)

    def __repr__(self) -> str:
        return f"<concord.objects.CoalitionSet members={self.members}>"

    def __str__(self) -> str:
        return "{" + ",".join(map(str, self.members)) + "}"
