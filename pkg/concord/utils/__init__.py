from .combinatorics import (
    MAX_ENUMERATION_AGENTS,
    all_masks,
    bell_number,
    bits,
    mask_of,
    restricted_growth_strings,
    submasks,
    subset_sums,
)
from .roots import bisect, expand_bracket
from .formatting import format_number, format_row
