"""Normally ordered homodyne noise spectra, SNR and force sensitivity.

The detected quadrature noise is reported normally ordered: the vacuum
(shot-noise) floor is subtracted, so S = 0 is an empty cavity, S < 0 is
squeezing and the total detected noise is S + 1. A stable fixed point can
never squeeze a quadrature below the vacuum floor itself, so S + 1 < 0 marks
a result outside the validity of the linearization and is flagged
``unphysical`` rather than clamped.

Signal normalization: SNR numerators use the intracavity quadrature mean
reported by :mod:`duffamp.response`. With this convention the on-resonance
minimum detectable force of the empty cavity is exactly gamma/4, which
serves as the standard-quantum-limit reference line; an overall transducer
scaling would move signal and reference together and change no comparison.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .model import DriveConfig, LoSideband, ModelParams
from .response import (
    _resonance_denominator,
    dc_signal,
    gain_matrix,
    upper_sideband_dc_signal,
)
from .steady_state import FixedPoint

#: S + 1 below this marks an unphysical (over-subtracted) total noise.
UNPHYSICAL_TOL = -1e-9

_IMAG_TOL = 1e-10


@dataclass(frozen=True)
class NoiseResult:
    """One evaluated noise point with its bookkeeping flags."""

    spectrum: float   # normally ordered S
    total: float      # S + 1, the detected noise level
    theta: float
    delta_s: float
    omega: float
    unphysical: bool

    @classmethod
    def from_spectrum(cls, spectrum: float, theta: float, delta_s: float,
                      omega: float = 0.0) -> "NoiseResult":
        total = spectrum + 1.0
        return cls(
            spectrum=spectrum,
            total=total,
            theta=theta,
            delta_s=delta_s,
            omega=omega,
            unphysical=total < UNPHYSICAL_TOL,
        )


def output_spectrum(omega: float, delta_s: float, theta: float,
                    fp: FixedPoint, params: ModelParams) -> float:
    """Normally ordered output noise power at analysis frequency ``omega``.

    Four-term combination of gain-matrix elements:

        S(omega, delta) = gamma^2 [ e^{2 i theta} (G11(omega-delta) + 1/gamma) G12(delta-omega)
                                   + G21(delta-omega) G12(omega-delta)
                                   + G21(omega+delta) G12(-omega-delta)
                                   + e^{-2 i theta} G21(omega+delta) (G22(-omega-delta) + 1/gamma) ].

    The combination is real up to rounding; the imaginary residue is checked
    against 1e-10 and discarded. For chi = 0 every term vanishes: vacuum in,
    vacuum out.
    """
    gamma = params.gamma
    g_a = gain_matrix(omega - delta_s, fp, params)
    g_b = gain_matrix(-omega + delta_s, fp, params)
    g_c = gain_matrix(omega + delta_s, fp, params)
    g_d = gain_matrix(-omega - delta_s, fp, params)
    value = gamma * gamma * (
        np.exp(2j * theta) * (g_a.g11 + 1.0 / gamma) * g_b.g12
        + g_b.g21 * g_a.g12
        + g_c.g21 * g_d.g12
        + np.exp(-2j * theta) * g_c.g21 * (g_d.g22 + 1.0 / gamma)
    )
    if abs(value.imag) > _IMAG_TOL * (1.0 + abs(value.real)):
        raise ArithmeticError(
            f"noise spectrum acquired an imaginary part {value.imag!r}; "
            "the four-term combination should be real"
        )
    return float(value.real)


def dc_spectrum_closed_form(delta_s, theta, fp: FixedPoint, params: ModelParams):
    """The omega = 0 spectrum in closed form.

        S(0, delta) = [2 gamma^2 |g|^2
                       + gamma (-i g e^{2 i theta} ((gamma/2 - i delta_eff)^2
                                                    + delta^2 + |g|^2) + c.c.)]
                      / [(lam_sq - delta^2)^2 + gamma^2 delta^2].

    Array-friendly in ``delta_s`` and ``theta``; cross-checked against
    :func:`output_spectrum` by the oracle suite.
    """
    gamma = params.gamma
    res = _resonance_denominator(delta_s, fp, params)
    delta_s = np.asarray(delta_s, dtype=float)
    delta_eff = params.delta + 4.0 * params.chi * fp.n0
    coupling = 2.0 * params.chi * fp.alpha0 * fp.alpha0
    factor = (gamma / 2.0 - 1j * delta_eff) ** 2 + delta_s**2 + abs(coupling) ** 2
    cross = -1j * coupling * np.exp(2j * np.asarray(theta, dtype=float)) * factor
    value = (2.0 * gamma**2 * abs(coupling) ** 2 + gamma * 2.0 * cross.real) / res
    return float(value) if np.ndim(value) == 0 else value


def dc_noise_at_gain_phase(delta_s, fp: FixedPoint, params: ModelParams):
    """DC noise at the phase that maximizes the gain, theta = nu - 2 phi0.

        S(0, delta) = gamma [8 chi^2 n0^2 gamma
                             + 4 chi n0 (delta^2 - lam_sq + gamma^2/2) sin(2(nu - phi0))
                             - 4 chi n0 gamma delta_eff cos(2(nu - phi0))]
                      / [(lam_sq - delta^2)^2 + gamma^2 delta^2].

    The sinusoid argument is twice the angle difference: substituting
    theta = nu - 2 phi0 into e^{2 i theta} leaves e^{2 i (nu - phi0)} after
    absorbing the phase of alpha0^2. Agrees with
    ``output_spectrum(0, delta, nu - 2 phi0, ...)`` to rounding.
    """
    gamma, chi, n0 = params.gamma, params.chi, fp.n0
    res = _resonance_denominator(delta_s, fp, params)
    delta_s = np.asarray(delta_s, dtype=float)
    nu = np.arctan2(-gamma * delta_s, fp.lam_sq - delta_s**2)
    psi = np.remainder(2.0 * (nu - fp.phi0), 2.0 * math.pi)
    delta_eff = params.delta + 4.0 * chi * n0
    value = gamma * (
        8.0 * chi**2 * n0**2 * gamma
        + 4.0 * chi * n0 * (delta_s**2 - fp.lam_sq + gamma**2 / 2.0) * np.sin(psi)
        - 4.0 * chi * n0 * gamma * delta_eff * np.cos(psi)
    ) / res
    return float(value) if np.ndim(value) == 0 else value


def snr(delta_s: float, fp: FixedPoint, params: ModelParams, drive: DriveConfig) -> float:
    """Signal-to-noise ratio |mean signal|^2 / (S + 1) at DC.

    The numerator uses the homodyne mean for the configured sideband and
    phase; the denominator restores the vacuum floor on top of the normally
    ordered noise. Scales exactly as eps_s^2. ``delta_s`` overrides the
    detuning stored in ``drive``.
    """
    drive = replace(drive, signal_detuning=delta_s)
    if drive.lo_sideband is LoSideband.LOWER:
        signal = dc_signal(fp, params, drive)
    else:
        signal = upper_sideband_dc_signal(fp, params, drive)
    spectrum = output_spectrum(0.0, delta_s, drive.theta, fp, params)
    return signal * signal / (spectrum + 1.0)


def min_force_empty(delta_s, gamma: float):
    """Minimum detectable signal amplitude for the empty cavity.

    ``eps_s_min = (1/2) sqrt(gamma^2/4 + delta^2)``: gamma/4 on resonance,
    growing without bound off resonance.
    """
    delta_s = np.asarray(delta_s, dtype=float)
    value = 0.5 * np.sqrt(gamma * gamma / 4.0 + delta_s**2)
    return float(value) if value.ndim == 0 else value


def min_force_nonlinear(fp: FixedPoint, params: ModelParams) -> float:
    """Squared minimum detectable signal amplitude on the gain ridge.

    Evaluates, with the signal detuning set on the ridge delta = lam,

        eps_s_min^2 = (gamma^2/4) [ (8 chi^2 n0^2 + lam_sq)
                                     / (gamma^2/4 + lam_sq + 4 chi^2 n0^2)
                                    + 2 chi Re(-i alpha0^2 / (gamma/2 - i delta_eff)) ].

    The expression is derived in the small-lam_sq regime near a switching
    point and is reported as printed for any stable fixed point; a negative
    return value signals departure from that regime (callers flag it
    ``unphysical`` instead of clamping).
    """
    if not fp.stable:
        raise ValueError("minimum detectable force is defined on stable fixed "
                         "points only (no stationary response otherwise)")
    gamma, chi, n0 = params.gamma, params.chi, fp.n0
    delta_eff = params.delta + 4.0 * chi * n0
    quarter = gamma * gamma / 4.0
    balance = (8.0 * chi**2 * n0**2 + fp.lam_sq) / (
        quarter + fp.lam_sq + 4.0 * chi**2 * n0**2
    )
    squeeze = 2.0 * chi * (
        -1j * fp.alpha0**2 / (gamma / 2.0 - 1j * delta_eff)
    ).real
    return quarter * (balance + squeeze)
