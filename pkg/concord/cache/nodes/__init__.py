from .entry import Entry
from .link import Link
