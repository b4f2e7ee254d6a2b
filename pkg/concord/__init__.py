from .exceptions import *
from .erlang import erlang_b, erlang_b_factorial, inverse_erlang_b
from .core import validate_partition, enumerate_partitions, enumerate_partitions_containing, random_partition
from .wardrop import wardrop_split, psi, h_residual, set_cache_capacity
from .stability import (
    pessimal_rate,
    proportional_payoff,
    random_payoff,
    configure,
    candidate_moves,
    blocks_config,
    is_stable,
    k_star,
    optimal_coalitions,
    stable_set_scan,
    gc_analysis,
    rb_pa_stability_radius,
    fragility_witness,
)
from .dynamics import check_a1, step, run
from .asymptotics import first_order_we, second_order_we, heavy_k_star, light_k_star, regime_crosscheck, psi_curve
from .simulation import simulate_loss, validate_we
