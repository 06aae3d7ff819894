"""Linearized small-signal response: gain matrix, DC homodyne signal, gain.

Around a fixed point the fluctuation pair (da, da*) responds to the weak
signal drive through the frequency-domain gain matrix

    G(omega) = (M + i omega I)^(-1),

with M the linearization from :mod:`duffamp.steady_state`. In closed form

    G(omega) = [4 (delta_eff^2 - |g|^2) + (gamma - 2 i omega)^2]^(-1)
               [[-2 gamma + 4 i (omega + delta_eff),  4 i g          ],
                [-4 i g*, -2 gamma + 4 i (omega - delta_eff)]],

where ``delta_eff = delta + 4 chi n0`` and ``g = 2 chi alpha0^2`` is the
pair coupling that the pump induces between da and da*. For chi = 0 the
matrix is diagonal: a driven, damped linear mode.

The homodyne DC signal depends on which pump sideband carries the local
oscillator. On the lower sideband the signal is generated entirely by the
nonlinearity (it vanishes for chi = 0); on the upper sideband it reduces to
the empty-cavity response when the pump is off.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import CriticalPointError
from .model import DriveConfig, LoSideband, ModelParams
from .steady_state import FixedPoint

#: Default near-critical mask: lam_sq below this fraction of gamma^2 marks a
#: fixed point whose linearized results should not be trusted.
MASK_FRACTION = 1e-3

_SINGULAR_TOL = 1e-14


def default_lambda_sq_mask(gamma: float) -> float:
    return MASK_FRACTION * gamma * gamma


def near_critical(fp: FixedPoint, params: ModelParams, lam_sq_min: float | None = None) -> bool:
    """Whether ``fp`` falls inside the linearization-validity mask."""
    if lam_sq_min is None:
        lam_sq_min = default_lambda_sq_mask(params.gamma)
    return fp.lam_sq < lam_sq_min


@dataclass(frozen=True)
class GainMatrix:
    """Gain matrix G(omega) = (M + i omega I)^(-1) at one frequency."""

    omega: float
    g11: complex
    g12: complex
    g21: complex
    g22: complex
    pair_coupling: complex  # 2 chi alpha0^2
    delta_eff: float        # delta + 4 chi n0

    def as_array(self) -> np.ndarray:
        return np.array([[self.g11, self.g12], [self.g21, self.g22]])


def gain_matrix(omega: float, fp: FixedPoint, params: ModelParams) -> GainMatrix:
    """Closed-form gain matrix at frequency ``omega``.

    Raises :class:`CriticalPointError` when the common denominator vanishes,
    which happens only at omega = 0 on a bifurcation point.
    """
    delta_eff = params.delta + 4.0 * params.chi * fp.n0
    coupling = 2.0 * params.chi * fp.alpha0 * fp.alpha0
    den = (
        4.0 * (delta_eff * delta_eff - abs(coupling) ** 2)
        + (params.gamma - 2j * omega) ** 2
    )
    if abs(den) <= _SINGULAR_TOL:
        raise CriticalPointError(
            f"gain matrix singular at omega={omega}: fixed point sits on a "
            "bifurcation (lam_sq = 0) where the linearization breaks down"
        )
    return GainMatrix(
        omega=float(omega),
        g11=(-2.0 * params.gamma + 4j * (omega + delta_eff)) / den,
        g12=4j * coupling / den,
        g21=-4j * np.conj(coupling) / den,
        g22=(-2.0 * params.gamma + 4j * (omega - delta_eff)) / den,
        pair_coupling=complex(coupling),
        delta_eff=float(delta_eff),
    )


def _resonance_denominator(delta_s, fp: FixedPoint, params: ModelParams):
    """(lam_sq - delta^2)^2 + gamma^2 delta^2, guarded against the exact zero."""
    delta_s = np.asarray(delta_s, dtype=float)
    value = (fp.lam_sq - delta_s**2) ** 2 + params.gamma**2 * delta_s**2
    if np.any(value <= _SINGULAR_TOL**2):
        raise CriticalPointError(
            "response evaluated at a bifurcation (lam_sq = 0 with zero signal "
            "detuning); the linearized gain diverges there"
        )
    return value


def gain_angle(delta_s, fp: FixedPoint, params: ModelParams):
    """Phase ``nu`` of the complex resonance factor.

    ``tan(nu) = -gamma delta / (lam_sq - delta^2)``, resolved with the
    two-argument arctangent so the quadrant survives; in (-pi, pi].
    """
    delta_s = np.asarray(delta_s, dtype=float)
    value = np.arctan2(-params.gamma * delta_s, fp.lam_sq - delta_s**2)
    return float(value) if value.ndim == 0 else value


def dc_signal_at_phase(fp: FixedPoint, params: ModelParams, delta_s, eps_s, theta):
    """Lower-sideband DC homodyne signal at local-oscillator phase ``theta``.

    Accepts array input for ``theta`` (or ``delta_s``) for grid scans.
    """
    res = _resonance_denominator(delta_s, fp, params)
    delta_s = np.asarray(delta_s, dtype=float)
    phase = np.asarray(theta, dtype=float) + 2.0 * fp.phi0
    value = (
        4.0
        * eps_s
        * params.chi
        * fp.n0
        * (
            (fp.lam_sq - delta_s**2) * np.cos(phase)
            - params.gamma * delta_s * np.sin(phase)
        )
        / res
    )
    return float(value) if np.ndim(value) == 0 else value


def dc_signal(fp: FixedPoint, params: ModelParams, drive: DriveConfig) -> float:
    """DC homodyne signal with the local oscillator on the lower sideband.

    This component is generated by the nonlinear response and vanishes
    identically for chi = 0.
    """
    if drive.lo_sideband is not LoSideband.LOWER:
        raise ValueError("dc_signal applies to the lower-sideband local oscillator; "
                         "use upper_sideband_dc_signal for the upper choice")
    return dc_signal_at_phase(fp, params, drive.signal_detuning, drive.eps_s, drive.theta)


def dc_signal_matrix_form(fp: FixedPoint, params: ModelParams, drive: DriveConfig) -> float:
    """Same DC signal assembled from gain-matrix elements.

    Evaluates ``-i eps_s [G12(delta) e^{i theta} - G21(-delta) e^{-i theta}]``;
    kept as an independent route for cross-checks against :func:`dc_signal`.
    """
    if drive.lo_sideband is not LoSideband.LOWER:
        raise ValueError("dc_signal_matrix_form applies to the lower sideband")
    delta_s = drive.signal_detuning
    g_plus = gain_matrix(delta_s, fp, params)
    g_minus = gain_matrix(-delta_s, fp, params)
    value = -1j * drive.eps_s * (
        g_plus.g12 * np.exp(1j * drive.theta) - g_minus.g21 * np.exp(-1j * drive.theta)
    )
    assert abs(value.imag) <= 1e-10 * (1.0 + abs(value.real))
    return float(value.real)


def optimal_gain(delta_s, fp: FixedPoint, eps_s: float, params: ModelParams):
    """Maximum DC signal over the local-oscillator phase.

    Equals ``4 eps_s chi n0 / sqrt((lam_sq - delta^2)^2 + gamma^2 delta^2)``,
    attained at theta = nu - 2 phi0. Non-negative; diverges only toward a
    bifurcation, where :class:`CriticalPointError` is raised instead.
    """
    if eps_s < 0.0:
        raise ValueError(f"signal amplitude must be non-negative, got {eps_s}")
    res = _resonance_denominator(delta_s, fp, params)
    value = 4.0 * eps_s * params.chi * fp.n0 / np.sqrt(res)
    return float(value) if np.ndim(value) == 0 else value


def optimal_phase(delta_s, fp: FixedPoint, params: ModelParams):
    """Local-oscillator phase that maximizes the lower-sideband DC signal."""
    nu = gain_angle(delta_s, fp, params)
    return nu - 2.0 * fp.phi0


def empty_cavity_response(delta_s, eps_s: float, gamma: float):
    """Best-phase DC response of the empty (linear, resonant) mode.

    ``2 eps_s / sqrt(gamma^2/4 + delta^2)``: the reference every nonlinear
    gain is compared against.
    """
    if eps_s < 0.0:
        raise ValueError(f"signal amplitude must be non-negative, got {eps_s}")
    delta_s = np.asarray(delta_s, dtype=float)
    value = 2.0 * eps_s / np.sqrt(gamma * gamma / 4.0 + delta_s**2)
    return float(value) if value.ndim == 0 else value


def upper_sideband_dc_signal(fp: FixedPoint, params: ModelParams, drive: DriveConfig) -> float:
    """DC homodyne signal with the local oscillator on the upper sideband.

    Evaluates ``i eps_s [G11(delta) e^{i theta} - G22(-delta) e^{-i theta}]``.
    This quadrature does not involve the mean field, so with the pump off and
    chi = 0 it carries the plain empty-cavity response.
    """
    if drive.lo_sideband is not LoSideband.UPPER:
        raise ValueError("upper_sideband_dc_signal applies to the upper-sideband "
                         "local oscillator")
    delta_s = drive.signal_detuning
    g_plus = gain_matrix(delta_s, fp, params)
    g_minus = gain_matrix(-delta_s, fp, params)
    value = 1j * drive.eps_s * (
        g_plus.g11 * np.exp(1j * drive.theta) - g_minus.g22 * np.exp(-1j * drive.theta)
    )
    assert abs(value.imag) <= 1e-10 * (1.0 + abs(value.real))
    return float(value.real)
