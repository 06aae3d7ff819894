"""Parameters and unit conversions for the driven Kerr resonator model.

The rotating-frame model is fixed by three rates: the energy decay rate
``gamma``, the pump detuning ``delta = omega0 - omega_p`` and the nonlinear
dispersion ``chi``. Drive settings (pump and signal amplitudes, signal
detuning, local-oscillator phase and sideband) live in :class:`DriveConfig`.

All frequencies and amplitudes are plain rates. Any consistent unit works,
so the dimensionless parameter sets used in the docs (``gamma=2.0`` style)
are simply rates measured in an arbitrary reference unit. Laboratory device
constants enter only through :func:`alpha_from_geometry` and
:func:`chi_from_alpha`, applied once at the boundary.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

#: Reduced Planck constant, J s (CODATA 2018). Compiled in, not configurable.
HBAR = 1.054571817e-34


def alpha_from_geometry(a_c: float, q_factor: float) -> float:
    """Quartic stiffness coefficient (1/m^2) from the critical amplitude.

    ``a_c`` is the vibration amplitude (m) at which the driven frequency
    response first develops infinite slope; ``q_factor`` is the mechanical
    quality factor. Returns ``2*sqrt(3) / (9 * a_c**2 * q_factor)``.
    """
    if a_c <= 0.0:
        raise ValueError(f"critical amplitude must be positive, got {a_c}")
    if q_factor <= 0.0:
        raise ValueError(f"quality factor must be positive, got {q_factor}")
    return 2.0 * math.sqrt(3.0) / (9.0 * a_c * a_c * q_factor)


def chi_from_alpha(alpha: float, m_star: float) -> float:
    """Nonlinear dispersion rate (1/s) from the quartic coefficient.

    ``m_star`` is the effective mass (kg). Dimensions close:
    (J s)(1/m^2)/kg = 1/s.
    """
    if m_star <= 0.0:
        raise ValueError(f"effective mass must be positive, got {m_star}")
    return 3.0 * HBAR * alpha / (8.0 * m_star)


@dataclass(frozen=True)
class PhysicalParams:
    """Laboratory-frame device constants.

    ``alpha`` and ``chi`` are stored together with the geometry that produced
    them and must be mutually consistent; build instances with
    :meth:`from_geometry` unless you have independently measured values that
    satisfy the same relations.
    """

    m_star: float    # effective mass, kg
    omega0: float    # linear angular frequency, rad/s
    q_factor: float  # mechanical quality factor
    a_c: float       # critical amplitude, m
    alpha: float     # quartic stiffness coefficient, 1/m^2
    chi: float       # nonlinear dispersion, 1/s

    def __post_init__(self) -> None:
        for name in ("m_star", "omega0", "q_factor", "a_c"):
            if getattr(self, name) <= 0.0:
                raise ValueError(f"{name} must be positive, got {getattr(self, name)}")
        alpha_ref = alpha_from_geometry(self.a_c, self.q_factor)
        if not math.isclose(self.alpha, alpha_ref, rel_tol=1e-12):
            raise ValueError(
                f"alpha={self.alpha!r} inconsistent with a_c={self.a_c!r}, "
                f"q_factor={self.q_factor!r} (expected {alpha_ref!r})"
            )
        chi_ref = chi_from_alpha(self.alpha, self.m_star)
        if not math.isclose(self.chi, chi_ref, rel_tol=1e-12):
            raise ValueError(
                f"chi={self.chi!r} inconsistent with alpha={self.alpha!r}, "
                f"m_star={self.m_star!r} (expected {chi_ref!r})"
            )

    @property
    def hbar(self) -> float:
        return HBAR

    @classmethod
    def from_geometry(
        cls, m_star: float, omega0: float, q_factor: float, a_c: float
    ) -> "PhysicalParams":
        """Derive ``alpha`` and ``chi`` from the measured geometry."""
        alpha = alpha_from_geometry(a_c, q_factor)
        chi = chi_from_alpha(alpha, m_star)
        return cls(m_star=m_star, omega0=omega0, q_factor=q_factor, a_c=a_c,
                   alpha=alpha, chi=chi)


@dataclass(frozen=True)
class ModelParams:
    """Rotating-frame model constants driving every formula in the package.

    ``gamma_t`` records the share of the decay owned by the displacement
    transducer. It is informational: the total ``gamma`` is the single decay
    rate used everywhere, and ``gamma_t`` defaults to it.
    """

    gamma: float              # total energy decay rate, 1/s
    delta: float              # pump detuning omega0 - omega_p, 1/s
    chi: float                # nonlinear dispersion, 1/s
    nbar: float = 0.0         # bath occupancy; only the zero-temperature case
    gamma_t: float | None = None

    def __post_init__(self) -> None:
        if self.gamma <= 0.0:
            raise ValueError(f"gamma must be positive, got {self.gamma}")
        if self.nbar != 0.0:
            raise ValueError(
                "nonzero bath occupancy (nbar > 0) is not supported: the "
                "finite-temperature extension is out of scope for this "
                "package, which treats the zero-temperature limit only"
            )
        if self.gamma_t is None:
            object.__setattr__(self, "gamma_t", self.gamma)
        elif self.gamma_t <= 0.0:
            raise ValueError(f"gamma_t must be positive, got {self.gamma_t}")


class LoSideband(Enum):
    """Which sideband of the pump the local oscillator sits on."""

    LOWER = "lower"  # omega_lo = omega_p - signal detuning
    UPPER = "upper"  # omega_lo = omega_p + signal detuning


@dataclass(frozen=True)
class DriveConfig:
    """Pump, signal and homodyne settings.

    Both drive amplitudes are real and non-negative; the pump phase is the
    global phase reference.
    """

    eps_p: float = 0.0            # pump amplitude, 1/s
    eps_s: float = 0.0            # signal amplitude, 1/s
    signal_detuning: float = 0.0  # omega_s - omega_p, 1/s
    theta: float = 0.0            # local-oscillator phase, rad
    lo_sideband: LoSideband = LoSideband.LOWER

    def __post_init__(self) -> None:
        for name in ("eps_p", "eps_s"):
            value = getattr(self, name)
            if isinstance(value, complex):
                raise ValueError(f"{name} must be real, got {value!r}")
            if value < 0.0:
                raise ValueError(f"{name} must be non-negative, got {value}")
        if not isinstance(self.lo_sideband, LoSideband):
            raise ValueError(f"lo_sideband must be a LoSideband, got {self.lo_sideband!r}")
