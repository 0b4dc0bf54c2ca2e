"""Resolution limits and source-number detection for point-source
super-resolution from band-limited Fourier data.

The package cross-validates three routes to the same two-point limit: the
closed-form expressions (``bounds``), a singular-value-thresholding detector
(``detect``), and a brute-force minimax oracle (``oracle``), with exact
location-amplitude identities (``identities``) as algebraic ground truth and a
Monte Carlo campaign harness (``harness``) on top.
"""

from ._version import __version__
from .model import (DiscreteMeasure, Measurement, NoiseDraw, draw_noise,
                    fourier_transform, measure_1d, synthesize, uniform_grid_1d,
                    load_measure, load_measurement, save_measure,
                    save_measurement)
from .identities import (DegenerateNodesError, IdentityContext,
                         build_identity_context, identity_amplitude,
                         identity_location, lagrange_weight,
                         sign_weighted_symmetric_vector, vandermonde,
                         vandermonde_inverse_row)
from .bounds import (NO_SUPER_RESOLUTION, CombinatorialConstants, LimitQuery,
                     combinatorial_constants, diffraction_limit,
                     location_bound, location_bound_general,
                     location_error_bound, number_detection_bound,
                     number_detection_bound_general, rayleigh_limit, srf,
                     verify_appendix_inequalities, verify_product_lower_bounds)
from .detect import (DetectionResult, Hankel2, default_directions, detect_1d,
                     detect_multid, hankel_from_samples, music_spectrum,
                     peak_count)
from .oracle import (OneSourceFit, best_one_source_fit,
                     empirical_two_point_limit, one_source_admissible,
                     sup_residual, worst_case_noise)
from .harness import (ExperimentConfig, TrialRecord, load_config,
                      run_amplitude_scaling, run_experiment, run_limit_sweep,
                      run_music_compare, run_random_1d, run_random_2d,
                      run_worst_case_1d)

__all__ = [name for name in dir() if not name.startswith("_")]
