"""Thermodynamic formalism on subshifts of finite type, exactly at desk scale.

Subpackages: sft (symbolic spaces and recodings), potentials, pressure
(transfer matrices, Gibbs measures), avoidance (non-dense orbit sets),
dimension (Bowen roots), maps (piecewise linear Markov models), moran
(the glued-orbit fractal construction with machine-checked estimates),
config and cli (structured configs, commands).
"""

from .sft import (Sft, EventuallyPeriodicPoint, eventually_periodic,
                  full_shift, golden_mean_shift, parse_word, format_word,
                  is_admissible, count_words, iter_words, primitivity_gap,
                  connecting_word, higher_block, forbid_word,
                  is_empty_or_reducible, subshift_is_empty,
                  point_is_admissible, point_distance, word_distance)
from .potentials import Potential, birkhoff_sum, variation, sup_norm
from .pressure import (WeightedMatrix, PressureResult, MarkovMeasure,
                       transfer_matrix, spectral_radius, pressure,
                       pressure_by_words, gibbs_markov_measure,
                       entropy_and_integral, variational_defect)
from .avoidance import (cylinder_word, avoidance_subshift,
                        is_transitive_point, avoidance_pressure_sweep,
                        AvoidanceSweep)
from .dimension import (DimensionResult, pressure_scaled, bowen_root,
                        dimension_sweep, DimensionSweep)
from .maps import (Branch, PiecewiseLinearMarkovMap, times_k, code_map,
                   point_to_symbols, cylinder_intervals,
                   moran_root_from_intervals)
from .moran import (MoranParams, MoranSystem, validate_params, build_family,
                    interleave_with_y, check_separation, check_avoidance,
                    check_ball_bound, pdp_certificate, run_verification)
from .config import SystemSpec, load_system, system_from_dict, system_to_dict, \
    load_moran_params

__version__ = "0.1.0"
