from __future__ import annotations

from typing import Hashable, Optional

__all__ = (
    "Link",
)


class Link:
    __slots__ = ("key", "previous", "later")

    def __init__(
            self,
            key: Optional[Hashable] = None,
            previous: Optional[Link] = None,
            later: Optional[Link] = None
    ) -> None:
        self.key = key
        self.previous = previous
        self.later = later
