"""Reference values computed independently before the implementation existed.

Cubic roots come from extended-precision polynomial solving of the
steady-state condition; matrix entries, spectra and the regression curve
from direct numerical evaluation of the defining expressions (cofactor
inversion, brute-force scans). Tests compare the package against these
frozen numbers, never the other way around.
"""

from duffamp import ModelParams, fixed_point_from_n0

BISTABLE = ModelParams(gamma=2.0, delta=-2.0, chi=1.0)
MONOSTABLE = ModelParams(gamma=2.0, delta=-1.0, chi=1.0)

# Roots of 4 n^3 - 8 n^2 + 5 n - 0.95 = 0, i.e. eps_p = sqrt(0.95) on the
# bistable parameters. They sum to 2 exactly.
ROOTS_095 = (0.36022155507466612, 0.70630278612734527, 0.93347565879798861)

# The bistable pump window in intensity: (I_p at n0 = 5/6, I_p at n0 = 1/2).
WINDOW_INTENSITIES = (50.0 / 54.0, 1.0)

GOLDEN_N0 = 0.36
GOLDEN_EPS_P = 0.9745891442038537
GOLDEN_PHI0 = -0.6632029927060933
GOLDEN_LAM_SQ = 0.7952

# Gain matrix at the golden fixed point, omega = 0.
GOLDEN_G11 = -1.2575452716297781 - 0.7042253521126758j
GOLDEN_G12 = +0.8785276852137682 + 0.2190828415001835j
GOLDEN_G21 = +0.8785276852137682 - 0.2190828415001835j
GOLDEN_G22 = -1.2575452716297781 + 0.7042253521126758j

GOLDEN_DC_GAIN = 1.8108651911468816        # optimal gain, delta = 0, eps_s = 1
GOLDEN_NU_AT_1 = -1.6728406479241615       # gain angle at delta = 1
GOLDEN_UPPER_DC = 1.5921642562830782       # upper sideband, delta = 0.5, theta = 0
GOLDEN_GAIN_PHASE_NOISE = 13.116930962029702  # S(0, 0) at theta = nu - 2 phi0
GOLDEN_SQUEEZE_MIN = -0.9335569714136712      # min over theta of S(0, 0)

EMPTY_CAVITY_AT_2 = 0.8944271909999159     # 2 eps_s / sqrt(5), gamma = 2

ALPHA_NANO = 3.8490017945975047e13         # a_c = 1e-9 m, Q = 1e4
ALPHA_UNIT = 0.38490017945975047           # a_c = 1 m, Q = 1
CHI_PLATINUM = 3.382540680137459e-4        # m* = 4.5e-18 kg with ALPHA_NANO

# Minimum detectable force squared along the monostable curve
# (gamma = 2, delta = -1, chi = 1), from direct formula evaluation.
MIN_FORCE_REGRESSION = (
    (0.05, 0.5694818757579841),
    (0.10, 0.46911703912652286),
    (0.15, 0.3711128682489479),
    (0.20, 0.2850678733031675),
    (0.25, 0.22499999999999992),
    (0.30, 0.2048421490612159),
    (0.35, 0.23019701922738955),
    (0.40, 0.29542142802362126),
    (0.45, 0.38903006154273934),
    (0.50, 0.4999999999999999),
    (0.55, 0.6200466739392201),
    (0.60, 0.7431277431277432),
    (0.65, 0.8645412301499031),
    (0.70, 0.9805385727127794),
    (0.75, 1.0883333333333332),
    (0.80, 1.1861684832548738),
    (0.85, 1.2732616372923948),
    (0.90, 1.3496227738721391),
    (0.95, 1.4158151381581316),
    (1.00, 1.4727272727272727),
)


def golden_fp():
    """The canonical lower-branch bistable fixed point used throughout."""
    return fixed_point_from_n0(GOLDEN_N0, BISTABLE)
