from __future__ import annotations

from typing import Any, Self

__all__ = (
    "Serializable",
)


class Serializable:
    """
    Base class for objects that round trip through plain dictionaries (JSON files, CLI payloads).
    """

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> Self:
        """
        Creates and returns a new instance of the class from the given dictionary data.

        Parameters
        ----------
            data : dict[str, Any]
                A dictionary containing the data to initialize the new instance.

        Returns
        -------
            Self

        Raises
        ------
            NotImplementedError
                If the method is not implemented in a subclass.
        """
        raise NotImplementedError

    @property
    def raw(self) -> dict[str, Any]:
        """
        The dictionary form accepted back by :meth:`from_dict`.
        """
        raise NotImplementedError
