"""Exponential sums of multiplicative functions."""
from ._backend import COMPILED
from .arith import FactorTable, crt_exact_divisibility, factorize, moebius, totient, valuation
from .characters import (
    DirichletCharacter,
    conductor_and_primitive_part,
    enumerate_characters,
    gauss_P_formula,
    gauss_polynomial_P,
    gauss_tau,
    induce,
    parse_character,
)
from .complexsum import CompensatedAccumulator, PhaseAngle, archimedean_twist, stream_sum, unit_phase
from .multfun import (
    ModifiedCharacterSpec,
    MultiplicativeFunctionSpec,
    construct_example1,
    construct_example2,
    eval_at,
    eval_range,
    modified_character,
)
from .pretentious import distance, distance_to_twisted_character, log_correlation, mean_value_F
from .sums import (
    A_expansion,
    A_recursive,
    B_r,
    SumTrajectory,
    char_closed_form,
    explicit_bounds,
    sum_trajectory,
    twisted_power_sums,
)

__version__ = "0.1.0"
