import math

import pytest

from duffamp import (
    HBAR,
    DriveConfig,
    LoSideband,
    ModelParams,
    PhysicalParams,
    alpha_from_geometry,
    chi_from_alpha,
)
from goldens import ALPHA_NANO, ALPHA_UNIT, CHI_PLATINUM


class TestAlphaFromGeometry:
    def test_unit_inputs(self):
        assert math.isclose(alpha_from_geometry(1.0, 1.0), ALPHA_UNIT, rel_tol=1e-15)

    def test_quarter_at_doubled_amplitude(self):
        assert alpha_from_geometry(2.0, 1.0) == pytest.approx(ALPHA_UNIT / 4.0, rel=1e-15)

    def test_nanobeam_scale(self):
        assert alpha_from_geometry(1e-9, 1e4) == pytest.approx(ALPHA_NANO, rel=1e-12)

    @pytest.mark.parametrize("a_c,q", [(0.0, 1.0), (-1.0, 1.0), (1.0, 0.0), (1.0, -2.0)])
    def test_rejects_nonpositive(self, a_c, q):
        with pytest.raises(ValueError):
            alpha_from_geometry(a_c, q)


class TestChiFromAlpha:
    def test_linear_resonator(self):
        assert chi_from_alpha(0.0, 1e-15) == 0.0

    def test_constants_cancel(self):
        # m* = 3 hbar / 8 makes the prefactor exactly one.
        assert chi_from_alpha(1.0, 3.0 * HBAR / 8.0) == 1.0

    def test_platinum_beam_scale(self):
        chi = chi_from_alpha(ALPHA_NANO, 4.5e-18)
        assert chi == pytest.approx(CHI_PLATINUM, rel=1e-12)
        # order-of-magnitude sanity: a few 1e-4 1/s
        assert 1e-4 < chi < 1e-3

    def test_rejects_nonpositive_mass(self):
        with pytest.raises(ValueError):
            chi_from_alpha(1.0, 0.0)


def test_doubling_q_halves_chi():
    m_star, a_c = 7.7e-18, 3e-9
    chi_1 = chi_from_alpha(alpha_from_geometry(a_c, 1e4), m_star)
    chi_2 = chi_from_alpha(alpha_from_geometry(a_c, 2e4), m_star)
    assert chi_2 == pytest.approx(chi_1 / 2.0, rel=1e-15)


def test_round_trip_scaling():
    # chi ~ 1 / (a_c^2 Q m*)
    base = chi_from_alpha(alpha_from_geometry(1e-9, 1e4), 1e-17)
    assert chi_from_alpha(alpha_from_geometry(2e-9, 1e4), 1e-17) == pytest.approx(base / 4, rel=1e-14)
    assert chi_from_alpha(alpha_from_geometry(1e-9, 1e4), 2e-17) == pytest.approx(base / 2, rel=1e-14)


class TestPhysicalParams:
    def test_from_geometry_is_consistent(self):
        phys = PhysicalParams.from_geometry(m_star=4.5e-18, omega0=2e8, q_factor=1e4, a_c=1e-9)
        assert phys.alpha == pytest.approx(ALPHA_NANO, rel=1e-12)
        assert phys.chi == pytest.approx(CHI_PLATINUM, rel=1e-12)
        assert phys.hbar == HBAR

    def test_rejects_inconsistent_alpha(self):
        phys = PhysicalParams.from_geometry(m_star=4.5e-18, omega0=2e8, q_factor=1e4, a_c=1e-9)
        with pytest.raises(ValueError, match="alpha"):
            PhysicalParams(
                m_star=phys.m_star, omega0=phys.omega0, q_factor=phys.q_factor,
                a_c=phys.a_c, alpha=phys.alpha * (1 + 1e-9), chi=phys.chi,
            )

    def test_rejects_inconsistent_chi(self):
        phys = PhysicalParams.from_geometry(m_star=4.5e-18, omega0=2e8, q_factor=1e4, a_c=1e-9)
        with pytest.raises(ValueError, match="chi"):
            PhysicalParams(
                m_star=phys.m_star, omega0=phys.omega0, q_factor=phys.q_factor,
                a_c=phys.a_c, alpha=phys.alpha, chi=phys.chi * (1 + 1e-9),
            )

    def test_rejects_nonpositive_fields(self):
        with pytest.raises(ValueError):
            PhysicalParams.from_geometry(m_star=-1.0, omega0=2e8, q_factor=1e4, a_c=1e-9)


class TestModelParams:
    def test_defaults(self):
        params = ModelParams(gamma=2.0, delta=-2.0, chi=1.0)
        assert params.nbar == 0.0
        assert params.gamma_t == params.gamma

    def test_explicit_transducer_decay(self):
        params = ModelParams(gamma=2.0, delta=0.0, chi=0.0, gamma_t=0.5)
        assert params.gamma_t == 0.5

    def test_rejects_nonpositive_gamma(self):
        with pytest.raises(ValueError):
            ModelParams(gamma=0.0, delta=0.0, chi=0.0)

    def test_rejects_thermal_bath(self):
        with pytest.raises(ValueError, match="not supported"):
            ModelParams(gamma=2.0, delta=0.0, chi=0.0, nbar=0.5)

    def test_equal_params_compare_equal(self):
        a = ModelParams(gamma=2.0, delta=-2.0, chi=1.0)
        b = ModelParams(gamma=2.0, delta=-2.0, chi=1.0)
        assert a == b


class TestDriveConfig:
    def test_defaults(self):
        drive = DriveConfig()
        assert drive.eps_p == 0.0
        assert drive.lo_sideband is LoSideband.LOWER

    @pytest.mark.parametrize("field", ["eps_p", "eps_s"])
    def test_rejects_negative_amplitudes(self, field):
        with pytest.raises(ValueError):
            DriveConfig(**{field: -0.1})

    @pytest.mark.parametrize("field", ["eps_p", "eps_s"])
    def test_rejects_complex_amplitudes(self, field):
        with pytest.raises(ValueError, match="real"):
            DriveConfig(**{field: 1.0 + 0.5j})

    def test_rejects_bad_sideband(self):
        with pytest.raises(ValueError):
            DriveConfig(lo_sideband="lower")
