"""Command-line front end.

Subcommands::

    duffamp steady   fixed points for one pump value, or a response curve
    duffamp gain     small-signal gain surface over (delta, n0)
    duffamp noise    output noise surface over (delta, n0)
    duffamp minforce minimum detectable force along the stable branches
    duffamp verify   run the numerical oracle suite

Model and drive parameters come from flags or from a config file
(``--config``, INI syntax with [model], [drive] and one section per
subcommand); flags override file values, and unknown keys are rejected.
Dataset subcommands write CSV (17 significant digits) plus a ``.meta.json``
provenance sidecar, and render a PNG next to the CSV when ``--plot`` is
given.

Exit codes: 0 success, 2 configuration error, 3 no solutions / empty
dataset, 4 oracle failure.
"""

from __future__ import annotations

import argparse
import configparser
import json
import re
import sys
from pathlib import Path

from ._version import __version__
from .errors import ConfigError, EmptySweepError
from .figures import render_dataset
from .model import (
    DriveConfig,
    LoSideband,
    ModelParams,
    alpha_from_geometry,
    chi_from_alpha,
)
from .steady_state import fixed_points
from .sweep import BranchFilter, Grid, SweepQuantity, SweepSpec, run_sweep
from .verify import DEFAULT_SEED, run_all

# Let negative numbers (including scientific notation) and grid values with
# a negative start ("-6:6:201") parse as option values rather than flags.
_VALUE_MATCHER = re.compile(r"^-(\d+\.?\d*|\.\d+)([eE][-+]?\d+)?(:|$)")


def _allow_negative_values(parser: argparse.ArgumentParser) -> None:
    parser._negative_number_matcher = _VALUE_MATCHER


_CONFIG_SCHEMA = {
    "model": {"gamma", "delta", "chi", "m_star", "a_c", "q_factor"},
    "drive": {"eps_p", "eps_s", "theta", "theta_mode", "lo_sideband"},
    "steady": {"curve", "out", "plot", "branch"},
    "gain": {"signal_detuning", "n0", "out", "plot", "branch",
             "mask_lambda_sq", "include_unstable"},
    "noise": {"signal_detuning", "n0", "out", "plot", "branch",
              "mask_lambda_sq", "include_unstable"},
    "minforce": {"n0", "out", "plot", "branch", "mask_lambda_sq"},
    "verify": {"seed", "report"},
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="duffamp",
        description="Bistable Kerr/Duffing amplifier analysis: steady states, "
                    "gain, noise spectra and force sensitivity.",
    )
    parser.add_argument("--version", action="version", version=f"duffamp {__version__}")
    _allow_negative_values(parser)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_model_flags(p):
        p.add_argument("--gamma", type=float, help="total decay rate (required)")
        p.add_argument("--delta", type=float, help="pump detuning omega0 - omega_p (required)")
        p.add_argument("--chi", type=float, help="nonlinear dispersion rate")
        p.add_argument("--m-star", type=float, help="effective mass (kg), to derive chi")
        p.add_argument("--a-c", type=float, help="critical amplitude (m), to derive chi")
        p.add_argument("--q-factor", type=float, help="quality factor, to derive chi")
        p.add_argument("--config", type=str, help="INI config file; flags override it")
        p.add_argument("--out", type=str, help="output CSV path")
        p.add_argument("--plot", action="store_const", const=True, default=None,
                       help="also render a PNG next to the CSV")
        p.add_argument("--branch", choices=["lower", "upper", "all"],
                       help="branch filter (default all)")

    steady = sub.add_parser("steady", help="fixed points and response curves")
    _allow_negative_values(steady)
    add_model_flags(steady)
    steady.add_argument("--eps-p", type=float, help="pump amplitude")
    steady.add_argument("--curve", type=str, metavar="START:STOP:POINTS",
                        help="sweep the pump over a grid and write CSV")
    steady.set_defaults(func=cmd_steady)

    def add_surface_flags(p):
        p.add_argument("--eps-s", type=float, help="signal amplitude (default 1)")
        p.add_argument("--signal-detuning", type=str, metavar="START:STOP:POINTS",
                       help="signal detuning grid (default -3*gamma:3*gamma:201)")
        p.add_argument("--n0", type=str, metavar="START:STOP:POINTS|auto",
                       help="occupation grid (default: auto per stable branch)")
        p.add_argument("--mask-lambda-sq", type=float,
                       help="near-critical threshold on lambda_sq (default 1e-3*gamma^2)")
        p.add_argument("--include-unstable", action="store_const", const=True,
                       default=None, help="also emit middle-branch rows")

    gain = sub.add_parser("gain", help="gain surface dataset")
    _allow_negative_values(gain)
    add_model_flags(gain)
    add_surface_flags(gain)
    gain.set_defaults(func=cmd_gain)

    noise = sub.add_parser("noise", help="noise surface dataset")
    _allow_negative_values(noise)
    add_model_flags(noise)
    add_surface_flags(noise)
    noise.add_argument("--theta", type=float, help="local-oscillator phase (rad)")
    noise.add_argument("--theta-mode", choices=["optimal", "fixed"],
                       help="per-point optimal phase or the fixed --theta (default optimal)")
    noise.add_argument("--lo-sideband", choices=["lower", "upper"],
                       help="local-oscillator sideband (default lower)")
    noise.set_defaults(func=cmd_noise)

    minforce = sub.add_parser("minforce", help="minimum detectable force curve")
    _allow_negative_values(minforce)
    add_model_flags(minforce)
    minforce.add_argument("--n0", type=str, metavar="START:STOP:POINTS|auto",
                          help="occupation grid (default: auto per stable branch)")
    minforce.add_argument("--mask-lambda-sq", type=float,
                          help="near-critical threshold on lambda_sq")
    minforce.set_defaults(func=cmd_minforce)

    verify = sub.add_parser("verify", help="run the oracle suite")
    _allow_negative_values(verify)
    verify.add_argument("--config", type=str, help="INI config file")
    verify.add_argument("--seed", type=int, help=f"sampling seed (default {DEFAULT_SEED})")
    verify.add_argument("--report", type=str, help="write a JSON report here")
    verify.set_defaults(func=cmd_verify)

    return parser


# ------------------------------------------------------------------ config

def load_config_file(path: str) -> dict[str, dict[str, str]]:
    """Read and strictly validate an INI config file."""
    parser = configparser.ConfigParser(interpolation=None)
    try:
        with open(path) as handle:
            parser.read_file(handle)
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path!r}: {exc}") from exc
    except configparser.Error as exc:
        raise ConfigError(f"malformed config file {path!r}: {exc}") from exc

    config: dict[str, dict[str, str]] = {}
    for section in parser.sections():
        if section not in _CONFIG_SCHEMA:
            raise ConfigError(
                f"unknown config section [{section}] "
                f"(known: {', '.join(sorted(_CONFIG_SCHEMA))})"
            )
        for key in parser[section]:
            if key not in _CONFIG_SCHEMA[section]:
                raise ConfigError(
                    f"unknown key {key!r} in section [{section}] "
                    f"(known: {', '.join(sorted(_CONFIG_SCHEMA[section]))})"
                )
        config[section] = dict(parser[section])
    return config


def _parse_with(parse, section, key):
    def wrapped(raw: str):
        try:
            return parse(raw)
        except (ValueError, TypeError) as exc:
            raise ConfigError(f"bad value for [{section}] {key}: {exc}") from exc
    return wrapped


def _as_bool(raw: str) -> bool:
    lowered = raw.strip().lower()
    if lowered in ("1", "true", "yes", "on"):
        return True
    if lowered in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"expected a boolean, got {raw!r}")


class _Resolver:
    """Merge flag values, config file values and defaults, in that order."""

    def __init__(self, ns: argparse.Namespace):
        self.ns = ns
        self.cfg = load_config_file(ns.config) if getattr(ns, "config", None) else {}

    def get(self, attr: str, section: str, key: str, parse, default=None, required=False):
        value = getattr(self.ns, attr, None)
        if value is None:
            raw = self.cfg.get(section, {}).get(key)
            if raw is not None:
                value = _parse_with(parse, section, key)(raw)
        if value is None:
            value = default
        if value is None and required:
            raise ConfigError(
                f"missing required parameter {key!r} "
                f"(flag --{attr.replace('_', '-')} or [{section}] {key})"
            )
        return value

    def model_params(self) -> ModelParams:
        gamma = self.get("gamma", "model", "gamma", float, required=True)
        delta = self.get("delta", "model", "delta", float, required=True)
        chi = self.get("chi", "model", "chi", float)
        if chi is None:
            m_star = self.get("m_star", "model", "m_star", float)
            a_c = self.get("a_c", "model", "a_c", float)
            q_factor = self.get("q_factor", "model", "q_factor", float)
            if None in (m_star, a_c, q_factor):
                raise ConfigError(
                    "chi is required: pass --chi (or [model] chi), or provide "
                    "--m-star, --a-c and --q-factor together to derive it"
                )
            chi = chi_from_alpha(alpha_from_geometry(a_c, q_factor), m_star)
        return ModelParams(gamma=gamma, delta=delta, chi=chi)

    def branch_filter(self, section: str) -> BranchFilter:
        label = self.get("branch", section, "branch", str, default="all")
        return BranchFilter(label)


# ---------------------------------------------------------------- commands

def cmd_steady(ns: argparse.Namespace) -> int:
    res = _Resolver(ns)
    params = res.model_params()
    curve = res.get("curve", "steady", "curve", str)
    out = res.get("out", "steady", "out", str)
    plot = res.get("plot", "steady", "plot", _as_bool, default=False)

    if curve is not None:
        if out is None:
            raise ConfigError("--curve needs --out to receive the CSV")
        spec = SweepSpec(
            quantity=SweepQuantity.RESPONSE,
            eps_p_grid=_grid("curve", curve),
            branch=res.branch_filter("steady"),
        )
        dataset = run_sweep(spec, params)
        _write_outputs(dataset, out, plot)
        return 0

    eps_p = res.get("eps_p", "drive", "eps_p", float)
    if eps_p is None:
        raise ConfigError("steady needs either --eps-p or --curve")
    points = fixed_points(eps_p, params)
    if not points:
        print(f"no physical fixed points at eps_p={eps_p:.6g}", file=sys.stderr)
        return 3
    print(f"fixed points at eps_p={eps_p:.6g} "
          f"(gamma={params.gamma:.6g}, delta={params.delta:.6g}, chi={params.chi:.6g})")
    header = f"{'n0':>12} {'branch':>8} {'stable':>7} {'Re lam+':>12} " \
             f"{'Im lam+':>12} {'lambda_sq':>12} {'phi0':>12}"
    print(header)
    for point in points:
        print(f"{point.n0:>12.6g} {point.branch.value:>8} "
              f"{str(point.stable).lower():>7} {point.lam_plus.real:>12.6g} "
              f"{point.lam_plus.imag:>12.6g} {point.lam_sq:>12.6g} {point.phi0:>12.6g}")
    return 0


def _grid(name: str, text: str) -> Grid:
    try:
        return Grid.parse(text)
    except ValueError as exc:
        raise ConfigError(f"bad {name} grid: {exc}") from exc


def _surface_spec(ns, res: _Resolver, section: str, quantity: SweepQuantity) -> SweepSpec:
    eps_s = res.get("eps_s", "drive", "eps_s", float, default=1.0)
    theta = res.get("theta", "drive", "theta", float, default=0.0)
    theta_mode = res.get("theta_mode", "drive", "theta_mode", str, default="optimal")
    sideband = res.get("lo_sideband", "drive", "lo_sideband", str, default="lower")
    detuning = res.get("signal_detuning", section, "signal_detuning", str)
    n0 = res.get("n0", section, "n0", str, default="auto")
    mask = res.get("mask_lambda_sq", section, "mask_lambda_sq", float)
    include_unstable = res.get("include_unstable", section, "include_unstable",
                               _as_bool, default=False)
    return SweepSpec(
        quantity=quantity,
        delta_grid=_grid("signal-detuning", detuning) if detuning else None,
        n0_grid=None if n0 == "auto" else _grid("n0", n0),
        branch=res.branch_filter(section),
        mask_lambda_sq=mask,
        drive=DriveConfig(eps_s=eps_s, theta=theta,
                          lo_sideband=LoSideband(sideband)),
        theta_mode=theta_mode,
        include_unstable=include_unstable,
    )


def _write_outputs(dataset, out: str, plot: bool) -> None:
    csv_path, meta_path = dataset.write(out)
    print(f"wrote {len(dataset.rows)} rows to {csv_path} (metadata: {meta_path})")
    if plot:
        figure_path = render_dataset(dataset, Path(out).with_suffix(".png"))
        print(f"wrote figure to {figure_path}")


def _run_surface(ns, section: str, quantity: SweepQuantity) -> int:
    res = _Resolver(ns)
    params = res.model_params()
    out = res.get("out", section, "out", str)
    if out is None:
        raise ConfigError(f"{section} requires --out for the CSV dataset")
    plot = res.get("plot", section, "plot", _as_bool, default=False)
    dataset = run_sweep(_surface_spec(ns, res, section, quantity), params)
    _write_outputs(dataset, out, plot)
    return 0


def cmd_gain(ns: argparse.Namespace) -> int:
    return _run_surface(ns, "gain", SweepQuantity.GAIN_SURFACE)


def cmd_noise(ns: argparse.Namespace) -> int:
    return _run_surface(ns, "noise", SweepQuantity.NOISE_SURFACE)


def cmd_minforce(ns: argparse.Namespace) -> int:
    res = _Resolver(ns)
    params = res.model_params()
    out = res.get("out", "minforce", "out", str)
    if out is None:
        raise ConfigError("minforce requires --out for the CSV dataset")
    plot = res.get("plot", "minforce", "plot", _as_bool, default=False)
    n0 = res.get("n0", "minforce", "n0", str, default="auto")
    spec = SweepSpec(
        quantity=SweepQuantity.MIN_FORCE,
        n0_grid=None if n0 == "auto" else _grid("n0", n0),
        branch=res.branch_filter("minforce"),
        mask_lambda_sq=res.get("mask_lambda_sq", "minforce", "mask_lambda_sq", float),
    )
    dataset = run_sweep(spec, params)
    _write_outputs(dataset, out, plot)
    return 0


def cmd_verify(ns: argparse.Namespace) -> int:
    res = _Resolver(ns)
    seed = res.get("seed", "verify", "seed", int, default=DEFAULT_SEED)
    report_path = res.get("report", "verify", "report", str)
    reports = run_all(seed=seed)
    for report in reports:
        print(report.line())
    if report_path is not None:
        payload = {"seed": seed, "checks": [r.as_dict() for r in reports]}
        Path(report_path).write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
        print(f"wrote report to {report_path}")
    return 0 if all(r.passed for r in reports) else 4


def main(argv=None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return ns.func(ns)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except EmptySweepError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
