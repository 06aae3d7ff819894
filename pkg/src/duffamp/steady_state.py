"""Semiclassical fixed points, linear stability and the bistable regime.

The mean amplitude of the pumped mode obeys

    d(alpha)/dt = -i eps_p - [gamma/2 + i (delta + 2 chi |alpha|^2)] alpha,

so a steady state with occupation ``n0 = |alpha0|^2`` requires the pump
intensity

    I_p = eps_p^2 = n0 [gamma^2/4 + (delta + 2 chi n0)^2],

a cubic in ``n0``. For sufficiently negative pump detuning the cubic is
S-shaped: between its two turning points three steady states coexist and the
middle one is unstable. The slope ``dI_p/dn0`` equals the product of the
eigenvalues of the linearized dynamics, written ``lam_sq`` throughout, so it
changes sign exactly at the turning points.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .model import ModelParams

# A cubic root counts as real when |Im| <= REAL_TOL * max(1, |Re|) and as
# physical when Re >= -CLAMP_TOL (then clamped to 0).
_REAL_TOL = 1e-9
_CLAMP_TOL = 1e-12
# Occupations closer than this (relative) are one degenerate double root.
_MERGE_TOL = 1e-7
# Proximity to a turning point that marks a fixed point as degenerate.
_TURNING_TOL = 1e-8


class Branch(Enum):
    LOWER = "lower"
    MIDDLE = "middle"
    UPPER = "upper"
    SINGLE = "single"


@dataclass(frozen=True)
class FixedPoint:
    """One semiclassical steady state of the pumped mode."""

    n0: float            # occupation |alpha0|^2
    alpha0: complex      # steady-state amplitude
    phi0: float          # arg(alpha0), quadrant-safe
    lam_plus: complex    # eigenvalues of the linearized dynamics
    lam_minus: complex
    lam_sq: float        # dI_p/dn0 = product of the eigenvalues
    stable: bool
    branch: Branch
    eps_p: float         # pump amplitude that produced this point
    degenerate: bool = False  # sits at a turning point (branches merge)


def pump_intensity(n0: float, params: ModelParams) -> float:
    """Pump intensity eps_p^2 that sustains occupation ``n0``."""
    if n0 < 0.0:
        raise ValueError(f"occupation must be non-negative, got {n0}")
    shifted = params.delta + 2.0 * params.chi * n0
    return n0 * (params.gamma**2 / 4.0 + shifted * shifted)


def stability_eigenvalues(n0: float, params: ModelParams) -> tuple[complex, complex]:
    """Eigenvalues of the linearized dynamics at occupation ``n0``.

    The pair is ``-gamma/2 +- i sqrt(p)`` with
    ``p = (delta + 6 chi n0)(delta + 2 chi n0)``: a complex-conjugate pair
    when ``p >= 0`` and two real values when ``p < 0``.
    """
    if n0 < 0.0:
        raise ValueError(f"occupation must be non-negative, got {n0}")
    product = (params.delta + 6.0 * params.chi * n0) * (params.delta + 2.0 * params.chi * n0)
    half = params.gamma / 2.0
    if product >= 0.0:
        osc = math.sqrt(product)
        return complex(-half, osc), complex(-half, -osc)
    split = math.sqrt(-product)
    return complex(-half + split, 0.0), complex(-half - split, 0.0)


def lambda_sq(n0: float, params: ModelParams) -> float:
    """Slope dI_p/dn0, equal to the product of the stability eigenvalues."""
    product = (params.delta + 6.0 * params.chi * n0) * (params.delta + 2.0 * params.chi * n0)
    return params.gamma**2 / 4.0 + product


def stability_matrix(alpha0: complex, params: ModelParams) -> np.ndarray:
    """2x2 matrix governing fluctuations (d/dt)(da, da*) = M (da, da*)."""
    n0 = abs(alpha0) ** 2
    delta_eff = params.delta + 4.0 * params.chi * n0
    coupling = 2.0 * params.chi * alpha0 * alpha0
    half = params.gamma / 2.0
    return np.array(
        [
            [-half - 1j * delta_eff, -1j * coupling],
            [1j * np.conj(coupling), -half + 1j * delta_eff],
        ]
    )


def turning_points(params: ModelParams) -> tuple[float, ...]:
    """Occupations where dI_p/dn0 vanishes: () or an ascending pair.

    Solves ``12 chi^2 n^2 + 8 chi delta n + delta^2 + gamma^2/4 = 0``. The
    root product is positive, so real roots share a sign; only a positive
    pair is returned (coincident at the bistability threshold).
    """
    chi = params.chi
    if chi == 0.0:
        return ()
    disc = 4.0 * chi * chi * (4.0 * params.delta**2 - 3.0 * params.gamma**2)
    if disc < 0.0:
        return ()
    spread = math.sqrt(disc)
    lead = 24.0 * chi * chi
    lo = (-8.0 * chi * params.delta - spread) / lead
    hi = (-8.0 * chi * params.delta + spread) / lead
    if hi < lo:
        lo, hi = hi, lo
    if lo <= 0.0:
        return ()
    return (lo, hi)


def bistability_condition(params: ModelParams) -> bool:
    """Whether three steady states coexist for some pump window.

    Requires softening-free positive dispersion, negative pump detuning and
    ``delta^2 >= 3 gamma^2 / 4``; equivalent to :func:`turning_points`
    returning a positive pair.
    """
    return (
        params.chi > 0.0
        and params.delta < 0.0
        and 4.0 * params.delta**2 - 3.0 * params.gamma**2 >= 0.0
    )


def fixed_point_from_n0(
    n0: float, params: ModelParams, eps_p: float | None = None
) -> FixedPoint:
    """Build the full fixed-point record for occupation ``n0``.

    When ``eps_p`` is omitted it is derived from the steady-state condition,
    so any ``n0 >= 0`` designates a valid operating point.
    """
    if n0 < 0.0:
        raise ValueError(f"occupation must be non-negative, got {n0}")
    if eps_p is None:
        eps_p = math.sqrt(pump_intensity(n0, params))
    shifted = params.delta + 2.0 * params.chi * n0
    alpha0 = -1j * eps_p / (params.gamma / 2.0 + 1j * shifted)
    lam_plus, lam_minus = stability_eigenvalues(n0, params)
    stable = lam_plus.real < 0.0 and lam_minus.real < 0.0
    branch, degenerate = _classify_branch(n0, params)
    return FixedPoint(
        n0=float(n0),
        alpha0=complex(alpha0),
        phi0=float(np.angle(alpha0)),
        lam_plus=lam_plus,
        lam_minus=lam_minus,
        lam_sq=lambda_sq(n0, params),
        stable=stable,
        branch=branch,
        eps_p=float(eps_p),
        degenerate=degenerate,
    )


def _classify_branch(n0: float, params: ModelParams) -> tuple[Branch, bool]:
    turning = turning_points(params)
    if len(turning) != 2:
        return Branch.SINGLE, False
    lo, hi = turning
    # Exactly at a turning point the merging branches are labeled by the
    # adjacent stable one and flagged degenerate.
    if abs(n0 - lo) <= _TURNING_TOL * max(1.0, lo):
        return Branch.LOWER, True
    if abs(n0 - hi) <= _TURNING_TOL * max(1.0, hi):
        return Branch.UPPER, True
    if n0 < lo:
        return Branch.LOWER, False
    if n0 > hi:
        return Branch.UPPER, False
    return Branch.MIDDLE, False


def _cubic_occupations(i_p: float, params: ModelParams) -> list[float]:
    """Real non-negative roots of the steady-state cubic, ascending."""
    gamma, delta, chi = params.gamma, params.delta, params.chi
    lorentz = gamma * gamma / 4.0 + delta * delta
    if chi == 0.0:
        return [i_p / lorentz]
    coeffs = (4.0 * chi * chi, 4.0 * chi * delta, lorentz, -i_p)
    # Companion-matrix eigenvalues, then a short Newton polish. The polish
    # tightens simple roots to machine precision and is skipped where the
    # derivative collapses (double roots at the turning points).
    roots = np.roots(coeffs)
    polished = []
    for root in roots:
        x = complex(root)
        for _ in range(3):
            val = ((coeffs[0] * x + coeffs[1]) * x + coeffs[2]) * x + coeffs[3]
            slope = (3.0 * coeffs[0] * x + 2.0 * coeffs[1]) * x + coeffs[2]
            if slope == 0.0:
                break
            step = val / slope
            if not np.isfinite(step) or abs(step) > 0.1 * (1.0 + abs(x)):
                break
            x -= step
            if abs(step) <= 1e-15 * max(1.0, abs(x)):
                break
        polished.append(x)

    real = []
    for x in polished:
        if abs(x.imag) <= _REAL_TOL * max(1.0, abs(x.real)):
            value = x.real
            if value >= -_CLAMP_TOL:
                real.append(max(value, 0.0))
    real.sort()

    merged: list[float] = []
    for value in real:
        if merged and abs(value - merged[-1]) <= _MERGE_TOL * max(1.0, value):
            continue
        merged.append(value)
    return merged


def fixed_points(eps_p: float, params: ModelParams) -> list[FixedPoint]:
    """All physical steady states at pump amplitude ``eps_p``, ascending n0.

    Returns one entry outside the bistable pump window and three inside it;
    complex or negative cubic roots are discarded as unphysical.
    """
    if eps_p < 0.0:
        raise ValueError(f"pump amplitude must be non-negative, got {eps_p}")
    occupations = _cubic_occupations(eps_p * eps_p, params)
    return [fixed_point_from_n0(n0, params, eps_p=eps_p) for n0 in occupations]


@dataclass(frozen=True)
class ResponseCurve:
    """Fixed points along a pump-amplitude grid, plus the bistable window."""

    samples: tuple[tuple[float, tuple[FixedPoint, ...]], ...]
    #: Pump intensities at the turning points (ascending), or None when
    #: the parameters are monostable.
    turning_intensities: tuple[float, float] | None

    def rows(self):
        """Flatten to (eps_p, fixed point) pairs in grid order."""
        for eps_p, points in self.samples:
            for point in points:
                yield eps_p, point


def response_curve(eps_p_values, params: ModelParams) -> ResponseCurve:
    """Solve the steady-state cubic along a monotone pump grid."""
    values = np.asarray(eps_p_values, dtype=float)
    if values.ndim != 1 or values.size == 0:
        raise ValueError("pump grid must be a non-empty 1-d sequence")
    steps = np.diff(values)
    if values.size > 1 and not (np.all(steps > 0.0) or np.all(steps < 0.0)):
        raise ValueError("pump grid must be strictly monotone")

    samples = tuple(
        (float(eps_p), tuple(fixed_points(float(eps_p), params))) for eps_p in values
    )
    turning = turning_points(params)
    window = None
    if len(turning) == 2:
        intensities = sorted(pump_intensity(n0, params) for n0 in turning)
        window = (intensities[0], intensities[1])
    return ResponseCurve(samples=samples, turning_intensities=window)
