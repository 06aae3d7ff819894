"""Driven Kerr/Duffing nanomechanical amplifier analysis.

Semiclassical bistability, linearized stability, small-signal homodyne gain,
normally ordered output noise spectra, SNR and minimum detectable force,
with a built-in suite of independent numerical oracles for every closed
form. See the README for the command-line interface.
"""

from ._version import __version__
from .errors import ConfigError, CriticalPointError, EmptySweepError
from .model import (
    HBAR,
    DriveConfig,
    LoSideband,
    ModelParams,
    PhysicalParams,
    alpha_from_geometry,
    chi_from_alpha,
)
from .noise import (
    NoiseResult,
    dc_noise_at_gain_phase,
    dc_spectrum_closed_form,
    min_force_empty,
    min_force_nonlinear,
    output_spectrum,
    snr,
)
from .response import (
    GainMatrix,
    dc_signal,
    dc_signal_at_phase,
    default_lambda_sq_mask,
    empty_cavity_response,
    gain_angle,
    gain_matrix,
    near_critical,
    optimal_gain,
    optimal_phase,
    upper_sideband_dc_signal,
)
from .steady_state import (
    Branch,
    FixedPoint,
    ResponseCurve,
    bistability_condition,
    fixed_point_from_n0,
    fixed_points,
    pump_intensity,
    response_curve,
    stability_eigenvalues,
    stability_matrix,
    turning_points,
)
from .sweep import (
    BranchFilter,
    Dataset,
    Grid,
    SweepQuantity,
    SweepSpec,
    branch_partition,
    default_n0_values,
    run_sweep,
)
from .verify import (
    OracleReport,
    check_gain_matrix_inverse,
    check_phase_optimality,
    check_pump_slope,
    check_signal_ode,
    check_spectrum_forms,
    integrate_signal_ode,
    run_all,
)

__all__ = [
    "__version__",
    "HBAR",
    "Branch",
    "BranchFilter",
    "ConfigError",
    "CriticalPointError",
    "Dataset",
    "DriveConfig",
    "EmptySweepError",
    "FixedPoint",
    "GainMatrix",
    "Grid",
    "LoSideband",
    "ModelParams",
    "NoiseResult",
    "OracleReport",
    "PhysicalParams",
    "ResponseCurve",
    "SweepQuantity",
    "SweepSpec",
    "alpha_from_geometry",
    "bistability_condition",
    "branch_partition",
    "check_gain_matrix_inverse",
    "check_phase_optimality",
    "check_pump_slope",
    "check_signal_ode",
    "check_spectrum_forms",
    "chi_from_alpha",
    "dc_noise_at_gain_phase",
    "dc_signal",
    "dc_signal_at_phase",
    "dc_spectrum_closed_form",
    "default_lambda_sq_mask",
    "default_n0_values",
    "empty_cavity_response",
    "fixed_point_from_n0",
    "fixed_points",
    "gain_angle",
    "gain_matrix",
    "integrate_signal_ode",
    "min_force_empty",
    "min_force_nonlinear",
    "near_critical",
    "optimal_gain",
    "optimal_phase",
    "output_spectrum",
    "pump_intensity",
    "response_curve",
    "run_all",
    "run_sweep",
    "snr",
    "stability_eigenvalues",
    "stability_matrix",
    "turning_points",
    "upper_sideband_dc_signal",
]
