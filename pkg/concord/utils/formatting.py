from __future__ import annotations

from typing import Iterable

__all__ = (
    "format_number",
    "format_row",
)

SIGNIFICANT_DIGITS = 12


def format_number(value: float | int) -> str:
    """Locale independent CSV rendering: integers verbatim, floats with 12 significant digits."""
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, int):
        return str(value)
    return f"{value:.{SIGNIFICANT_DIGITS}g}"


def format_row(values: Iterable[object]) -> list[str]:
    return [format_number(v) if isinstance(v, (int, float)) else str(v) for v in values]
