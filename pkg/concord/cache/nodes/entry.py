from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING, Generic, Hashable, TypeVar

if TYPE_CHECKING:
    from .link import Link

V = TypeVar('V')

__all__ = (
    "Entry",
)


@dataclass(slots=True)
class Entry(Generic[V]):
    key: Hashable
    value: V
    frequency: int
    link: Link
