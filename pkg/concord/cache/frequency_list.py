from __future__ import annotations

from typing import Optional

from concord.cache.nodes import Link

__all__ = (
    "FrequencyList",
)


class FrequencyList:
    """Doubly linked list of the keys sharing one access frequency, oldest first."""
    __slots__ = ("head", "tail", "size")

    def __init__(self) -> None:
        self.head: Link = Link()
        self.tail: Link = Link()
        self.size: int = 0

        self.head.later, self.tail.previous = self.tail, self.head

    def append(self, link: Link) -> None:
        last = self.tail.previous
        assert last is not None

        last.later = link
        self.tail.previous = link

        link.previous = last
        link.later = self.tail
        self.size += 1

    def popleft(self) -> Optional[Link]:
        if not self:
            return None

        link = self.head.later
        self.remove(link)
        return link

    def remove(self, link: Optional[Link]) -> None:
        if link is None or link.previous is None or link.later is None:
            return

        link.previous.later = link.later
        link.later.previous = link.previous

        link.later = None
        link.previous = None
        self.size -= 1

    def __len__(self) -> int:
        return self.size

    def __bool__(self) -> bool:
        return self.size > 0
