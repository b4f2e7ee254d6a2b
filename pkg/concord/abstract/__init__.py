from .payoff_rule import PayoffRule
from .serializable import Serializable
