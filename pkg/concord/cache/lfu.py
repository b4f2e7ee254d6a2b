from __future__ import annotations

from collections import defaultdict
from threading import Lock
from typing import Generic, Hashable, Optional, TypeVar

from concord.cache.frequency_list import FrequencyList
from concord.cache.nodes import Entry, Link

V = TypeVar('V')

__all__ = (
    "LFUCache",
)


class LFUCache(Generic[V]):
    """
    Least frequently used memo table.

    Every key sits in the list of its access frequency; eviction pops the oldest key of the
    lowest frequency. Reads and writes take one lock, values are handed out as stored, so
    callers must store immutable values.

    Operations
    ----------
        .. describe:: len(x)

            Returns the number of cached entries.

        .. describe:: key in x

            Checks whether a key is cached without touching its frequency.

        .. describe:: x[key]

            Returns the cached value, raising ``KeyError`` when absent.

    Attributes
    ----------
        capacity : int
            Maximum number of entries held before eviction.
        hits : int
            Number of successful lookups.
        misses : int
            Number of failed lookups.
    """

    def __init__(self, *, capacity: int) -> None:
        if capacity <= 0:
            raise ValueError("LFU capacity must be positive.")

        self._capacity: int = capacity
        self._entries: dict[Hashable, Entry[V]] = {}
        self._frequencies: defaultdict[int, FrequencyList] = defaultdict(FrequencyList)
        self._min: int = 1
        self._lock = Lock()

        self.hits: int = 0
        self.misses: int = 0

    @property
    def capacity(self) -> int:
        return self._capacity

    def __len__(self) -> int:
        return len(self._entries)

    def __contains__(self, key: Hashable) -> bool:
        return key in self._entries

    def __getitem__(self, key: Hashable) -> V:
        value = self.get(key)
        if value is None:
            raise KeyError(f'"{key}" could not be found in LFU.')

        return value

    def __setitem__(self, key: Hashable, value: V) -> None:
        self.put(key, value)

    def _touch(self, entry: Entry[V]) -> None:
        old = self._frequencies[entry.frequency]
        old.remove(entry.link)

        if entry.frequency == self._min and not old:
            self._min += 1

        entry.frequency += 1
        self._frequencies[entry.frequency].append(entry.link)

    def get(self, key: Hashable, default: Optional[V] = None) -> Optional[V]:
        """
        Looks a key up and bumps its frequency.

        Parameters
        ----------
            key : Hashable
                The memo key.
            default : Optional[V]
                Value returned when the key is absent.

        Returns
        -------
            Optional[V]
        """
        with self._lock:
            entry = self._entries.get(key)
            if entry is None:
                self.misses += 1
                return default

            self.hits += 1
            self._touch(entry)
            return entry.value

    def put(self, key: Hashable, value: V) -> None:
        """
        Stores a value, evicting the least frequently used key when full.

        Parameters
        ----------
            key : Hashable
                The memo key.
            value : V
                The value to store.

        Returns
        -------
            None
        """
        with self._lock:
            entry = self._entries.get(key)
            if entry is not None:
                entry.value = value
                self._touch(entry)
                return

            if len(self._entries) >= self._capacity:
                evicted = self._frequencies[self._min].popleft()
                if evicted is not None:
                    self._entries.pop(evicted.key, None)

            link = Link(key)
            self._entries[key] = Entry(key=key, value=value, frequency=1, link=link)
            self._frequencies[1].append(link)
            self._min = 1

    def clear(self) -> None:
        """
        Drops every entry and resets the counters.

        Returns
        -------
            None
        """
        with self._lock:
            self._entries.clear()
            self._frequencies.clear()
            self._min = 1
            self.hits = 0
            self.misses = 0
