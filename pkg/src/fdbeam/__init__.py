"""Analog beamforming codebook design for full-duplex transceivers.

Designs transmit/receive codebook pairs that minimize self-interference
coupling across all beam pairs while guaranteeing coverage gain, and
evaluates them against conventional codebooks under several
self-interference channel models.
"""

__version__ = "0.1.0"

from .geometry import (ArrayGeometry, Direction, DirectionGrid, SteeringMatrix,
                       array_response, coverage_grid, dense_eval_grid,
                       element_positions, steering_matrix)
from .quantization import (QuantizationSpec, QuantizedBeam, QuantizedWeight,
                           amp_levels, deepest_amp_level, phase_levels,
                           project_beam, project_weight, realize)
from .channels import (ChannelError, FarFieldRays, Rayleigh, RicianMixture,
                       SphericalNearField, UserChannel, draw_channel,
                       draw_error, draw_rayleigh, draw_user_channel,
                       farfield_channel, make_rng, rician_mixture,
                       spherical_channel, worst_case_error)
from .codebooks import (Codebook, CodebookFormatError, WindowSpec, cbf, load,
                        save, scale, taylor_window_1d, to_matrix, windowed_cbf)
from .solver import (BeamSubproblem, InfeasibleProblemError, SolverConfig,
                     SolverResult, oracle_solve, project_box,
                     project_feasible, project_gain_disc, solve_beam)
from .designer import (DesignError, DesignParams, DesignResult, design,
                       design_robust, initialize, target_gains)
from .metrics import (CouplingReport, CoverageReport, Cut, LinkBudget,
                      RateReport, average_coupling, capacities,
                      check_coverage_constraint, coverage, pattern_cut,
                      rate_rx, rate_tx, to_db)
from .harness import (AxisPoint, CSV_COLUMNS, ExperimentConfig, TrialRecord,
                      axis_points, evaluate_under_error, link_sweep,
                      run_trial, sweep, worker_count)
