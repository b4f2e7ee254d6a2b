from .coalition import CoalitionSet
from .system_spec import SystemSpec
from .partition import Partition
from .payoff import PayoffVector
from .wardrop_result import WardropResult
from .configuration import Configuration
from .verdict import BlockWitness, StabilityVerdict
from .psi import PsiPoint, KStarResult
from .approx_we import ApproxWE
from .sim_estimate import SimEstimate, BlockValidation
from .trace import TraceStep, DynamicsTrace, A1Report
from .report import ScanRow, StabilityReport, RegimeRow, RegimeTable
from .run_config import RunConfig
from .rules import *
