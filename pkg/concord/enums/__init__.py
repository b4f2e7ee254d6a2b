from .stability_rule import StabilityRule
from .move_kind import MoveKind
from .pessimal_mode import PessimalMode
from .terminal import Terminal
from .approx_order import ApproxOrder
from .service_law import ServiceLaw
from .cache_capacity import CacheCapacity
