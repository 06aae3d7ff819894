"""Dataset generation: response curves, gain/noise surfaces, min-force curves.

Surfaces are parametrized by the occupation ``n0`` (each value implies its
pump amplitude through the steady-state condition) rather than by the pump,
which keeps every grid point single-valued across the bistable window. Rows
inside the near-critical mask (``lam_sq`` below the threshold) are still
emitted, flagged ``near_critical``; unstable (middle-branch) points are
excluded from surfaces unless explicitly requested.

Identical spec + parameters always produce byte-identical CSV output. Grid
rows are independent; set ``DUFFAMP_THREADS`` to evaluate row blocks in a
thread pool (output order is fixed by the grid either way).
"""

from __future__ import annotations

import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

import numpy as np

from ._version import __version__
from .errors import CriticalPointError, EmptySweepError
from .model import DriveConfig, ModelParams
from .noise import UNPHYSICAL_TOL, dc_spectrum_closed_form
from .response import default_lambda_sq_mask, gain_angle, optimal_gain
from .steady_state import (
    Branch,
    fixed_point_from_n0,
    response_curve,
    turning_points,
)
from .noise import min_force_nonlinear


class SweepQuantity(Enum):
    RESPONSE = "response"
    GAIN_SURFACE = "gain_surface"
    NOISE_SURFACE = "noise_surface"
    MIN_FORCE = "min_force"


class BranchFilter(Enum):
    LOWER = "lower"
    UPPER = "upper"
    ALL = "all"


@dataclass(frozen=True)
class Grid:
    """A strictly monotone linspace specification."""

    start: float
    stop: float
    points: int

    def __post_init__(self) -> None:
        if self.points < 2:
            raise ValueError(f"grid needs at least 2 points, got {self.points}")
        if not (math.isfinite(self.start) and math.isfinite(self.stop)):
            raise ValueError("grid endpoints must be finite")
        if self.start == self.stop:
            raise ValueError("grid endpoints must differ")

    def values(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.points)

    @classmethod
    def parse(cls, text: str) -> "Grid":
        parts = text.split(":")
        if len(parts) != 3:
            raise ValueError(f"expected START:STOP:POINTS, got {text!r}")
        return cls(float(parts[0]), float(parts[1]), int(parts[2]))


@dataclass(frozen=True)
class SweepSpec:
    """What to sweep and how."""

    quantity: SweepQuantity
    eps_p_grid: Grid | None = None
    delta_grid: Grid | None = None
    n0_grid: Grid | None = None     # None selects the per-branch default
    branch: BranchFilter = BranchFilter.ALL
    mask_lambda_sq: float | None = None
    drive: DriveConfig = field(default_factory=DriveConfig)
    theta_mode: str = "optimal"     # "optimal" or "fixed"
    include_unstable: bool = False

    def __post_init__(self) -> None:
        if self.theta_mode not in ("optimal", "fixed"):
            raise ValueError(f"theta_mode must be 'optimal' or 'fixed', got {self.theta_mode!r}")


@dataclass
class Dataset:
    """Column-named rows plus the provenance metadata written alongside."""

    columns: tuple[str, ...]
    rows: list[tuple]
    meta: dict

    def column(self, name: str) -> np.ndarray:
        index = self.columns.index(name)
        return np.array([row[index] for row in self.rows])

    def to_csv_text(self) -> str:
        lines = [",".join(self.columns)]
        for row in self.rows:
            lines.append(",".join(_format_cell(value) for value in row))
        return "\n".join(lines) + "\n"

    def write(self, path: str | Path) -> tuple[Path, Path]:
        """Write the CSV and its metadata sidecar; returns both paths."""
        path = Path(path)
        path.write_text(self.to_csv_text())
        sidecar = path.with_name(path.stem + ".meta.json")
        sidecar.write_text(json.dumps(self.meta, indent=2, sort_keys=True) + "\n")
        return path, sidecar


def _format_cell(value) -> str:
    # bool is an int subclass: test it first.
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (float, np.floating)):
        return "%.17g" % value
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return str(value)


def _map_ordered(function, items):
    workers = int(os.environ.get("DUFFAMP_THREADS", "1") or "1")
    if workers <= 1 or len(items) <= 1:
        return [function(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(function, items))


def default_n0_values(
    params: ModelParams,
    points: int = 201,
    lam_sq_min: float | None = None,
    branch: BranchFilter = BranchFilter.ALL,
) -> np.ndarray:
    """Default occupation grid spanning the stable branches.

    Bistable parameters produce one grid per stable branch, each inset from
    its turning point to the occupation where ``lam_sq`` meets the mask
    threshold. Monostable softening parameters span three times the
    occupation of slowest relaxation; otherwise [0, 1] is used and callers
    are expected to pass an explicit grid.
    """
    if lam_sq_min is None:
        lam_sq_min = default_lambda_sq_mask(params.gamma)
    turning = turning_points(params)
    if len(turning) == 2:
        low, high = turning
        inner_low, inner_high = _mask_crossings(params, lam_sq_min)
        pieces = []
        if branch in (BranchFilter.LOWER, BranchFilter.ALL):
            pieces.append(np.linspace(low * 0.005, inner_low, points))
        if branch in (BranchFilter.UPPER, BranchFilter.ALL):
            pieces.append(np.linspace(inner_high, 1.75 * high, points))
        return np.concatenate(pieces)
    if params.chi > 0.0 and params.delta < 0.0:
        center = -params.delta / (3.0 * params.chi)  # slowest relaxation
        return np.linspace(center / 100.0, 3.0 * center, points)
    return np.linspace(0.0, 1.0, points)


def _mask_crossings(params: ModelParams, lam_sq_min: float) -> tuple[float, float]:
    """Occupations where lam_sq crosses the mask threshold around the window."""
    chi, delta, gamma = params.chi, params.delta, params.gamma
    a = 12.0 * chi * chi
    b = 8.0 * chi * delta
    c = delta * delta + gamma * gamma / 4.0 - lam_sq_min
    disc = b * b - 4.0 * a * c
    root = math.sqrt(max(disc, 0.0))
    return (-b - root) / (2.0 * a), (-b + root) / (2.0 * a)


def run_sweep(spec: SweepSpec, params: ModelParams) -> Dataset:
    """Produce the tabular dataset for ``spec``.

    Raises :class:`EmptySweepError` when the grid yields no physical rows
    (for example a bistable n0 grid entirely on the excluded middle branch).
    """
    mask = spec.mask_lambda_sq
    if mask is None:
        mask = default_lambda_sq_mask(params.gamma)

    if spec.quantity is SweepQuantity.RESPONSE:
        dataset = _response_dataset(spec, params, mask)
    elif spec.quantity in (SweepQuantity.GAIN_SURFACE, SweepQuantity.NOISE_SURFACE):
        dataset = _surface_dataset(spec, params, mask)
    elif spec.quantity is SweepQuantity.MIN_FORCE:
        dataset = _min_force_dataset(spec, params, mask)
    else:  # pragma: no cover - enum is exhaustive
        raise ValueError(f"unknown sweep quantity {spec.quantity!r}")

    if not dataset.rows:
        raise EmptySweepError(
            f"{spec.quantity.value} sweep produced no rows "
            f"(branch filter {spec.branch.value!r}, "
            f"include_unstable={spec.include_unstable}); "
            "the grid contains no matching physical fixed points"
        )
    return dataset


def _meta(spec: SweepSpec, params: ModelParams, mask: float, columns, extra=None) -> dict:
    meta = {
        "package": "duffamp",
        "version": __version__,
        "quantity": spec.quantity.value,
        "model": {
            "gamma": params.gamma,
            "delta": params.delta,
            "chi": params.chi,
            "nbar": params.nbar,
            "gamma_t": params.gamma_t,
        },
        "drive": {
            "eps_p": spec.drive.eps_p,
            "eps_s": spec.drive.eps_s,
            "signal_detuning": spec.drive.signal_detuning,
            "theta": spec.drive.theta,
            "lo_sideband": spec.drive.lo_sideband.value,
        },
        "grids": {
            name: None if grid is None else {"start": grid.start, "stop": grid.stop,
                                             "points": grid.points}
            for name, grid in (("eps_p", spec.eps_p_grid), ("delta", spec.delta_grid),
                               ("n0", spec.n0_grid))
        },
        "branch": spec.branch.value,
        "mask_lambda_sq": mask,
        "theta_mode": spec.theta_mode,
        "include_unstable": spec.include_unstable,
        "columns": list(columns),
    }
    if extra:
        meta.update(extra)
    return meta


_RESPONSE_COLUMNS = ("eps_p", "I_p", "n0", "branch", "stable",
                     "re_lambda_plus", "im_lambda_plus", "lambda_sq", "phi0")


def _response_dataset(spec: SweepSpec, params: ModelParams, mask: float) -> Dataset:
    if spec.eps_p_grid is None:
        raise ValueError("response sweep requires eps_p_grid")
    curve = response_curve(spec.eps_p_grid.values(), params)
    rows = []
    for eps_p, point in curve.rows():
        if not _branch_selected(point.branch, spec.branch):
            continue
        rows.append((
            eps_p,
            eps_p * eps_p,
            point.n0,
            point.branch.value,
            point.stable,
            point.lam_plus.real,
            point.lam_plus.imag,
            point.lam_sq,
            point.phi0,
        ))
    extra = {"turning_intensities": list(curve.turning_intensities)
             if curve.turning_intensities else None}
    return Dataset(_RESPONSE_COLUMNS, rows, _meta(spec, params, mask, _RESPONSE_COLUMNS, extra))


def _branch_selected(branch: Branch, selector: BranchFilter) -> bool:
    if selector is BranchFilter.ALL:
        return True
    return branch.value == selector.value


_GAIN_COLUMNS = ("delta", "n0", "branch", "lambda_sq", "nu", "g", "near_critical")
_NOISE_COLUMNS = ("delta", "n0", "branch", "theta", "S", "S_total",
                  "near_critical", "unphysical")


def _surface_dataset(spec: SweepSpec, params: ModelParams, mask: float) -> Dataset:
    delta_grid = spec.delta_grid
    if delta_grid is None:
        delta_grid = Grid(-3.0 * params.gamma, 3.0 * params.gamma, 201)
    deltas = delta_grid.values()
    n0_values = (
        spec.n0_grid.values()
        if spec.n0_grid is not None
        else default_n0_values(params, lam_sq_min=mask, branch=spec.branch)
    )
    gain = spec.quantity is SweepQuantity.GAIN_SURFACE
    columns = _GAIN_COLUMNS if gain else _NOISE_COLUMNS

    def block(n0: float) -> list[tuple]:
        if n0 < 0.0:
            return []
        fp = fixed_point_from_n0(float(n0), params)
        if not _branch_selected(fp.branch, spec.branch):
            return []
        if fp.branch is Branch.MIDDLE and not spec.include_unstable:
            return []
        near = bool(fp.lam_sq < mask)
        try:
            nu = gain_angle(deltas, fp, params)
            if gain:
                values = optimal_gain(deltas, fp, spec.drive.eps_s, params)
            else:
                if spec.theta_mode == "optimal":
                    thetas = nu - 2.0 * fp.phi0
                else:
                    thetas = np.full_like(deltas, spec.drive.theta)
                values = dc_spectrum_closed_form(deltas, thetas, fp, params)
        except CriticalPointError:
            # Exactly on a bifurcation: report the row flagged, not aborted.
            nan = np.full_like(deltas, np.nan)
            nu, values = nan, nan
            thetas = nan
            near = True
        rows = []
        for j, delta_s in enumerate(deltas):
            if gain:
                rows.append((float(delta_s), fp.n0, fp.branch.value, fp.lam_sq,
                             float(nu[j]), float(values[j]), near))
            else:
                total = float(values[j]) + 1.0
                rows.append((float(delta_s), fp.n0, fp.branch.value,
                             float(thetas[j]) if np.ndim(thetas) else float(thetas),
                             float(values[j]), total, near,
                             bool(total < UNPHYSICAL_TOL)))
        return rows

    blocks = _map_ordered(block, list(n0_values))
    rows = [row for blk in blocks for row in blk]
    return Dataset(columns, rows, _meta(spec, params, mask, columns))


_MIN_FORCE_COLUMNS = ("n0", "eps_p", "lambda_sq", "eps_s_min", "empty_cavity_ref",
                      "eps_s_min_sq", "unphysical")


def _min_force_dataset(spec: SweepSpec, params: ModelParams, mask: float) -> Dataset:
    n0_values = (
        spec.n0_grid.values()
        if spec.n0_grid is not None
        else default_n0_values(params, lam_sq_min=mask, branch=spec.branch)
    )
    reference = 0.25 * params.gamma

    def row(n0: float):
        if n0 < 0.0:
            return None
        fp = fixed_point_from_n0(float(n0), params)
        if not fp.stable or not _branch_selected(fp.branch, spec.branch):
            return None
        squared = min_force_nonlinear(fp, params)
        minimum = math.sqrt(squared) if squared >= 0.0 else float("nan")
        return (fp.n0, fp.eps_p, fp.lam_sq, minimum, reference, squared,
                bool(squared < 0.0))

    rows = [r for r in _map_ordered(row, list(n0_values)) if r is not None]
    return Dataset(_MIN_FORCE_COLUMNS, rows,
                   _meta(spec, params, mask, _MIN_FORCE_COLUMNS))


def branch_partition(dataset: Dataset) -> tuple[dict[str, Dataset], int]:
    """Split a dataset by branch label, dropping middle-branch rows.

    Returns the per-branch datasets and the count of dropped middle rows
    (unstable points have no stationary spectrum and never belong in a
    surface partition).
    """
    if "branch" not in dataset.columns:
        raise ValueError("dataset has no branch column")
    index = dataset.columns.index("branch")
    partitions: dict[str, list[tuple]] = {}
    dropped = 0
    for row in dataset.rows:
        label = row[index]
        if label == Branch.MIDDLE.value:
            dropped += 1
            continue
        partitions.setdefault(label, []).append(row)
    out = {}
    for label, rows in partitions.items():
        meta = dict(dataset.meta)
        meta["branch_partition"] = label
        out[label] = Dataset(dataset.columns, rows, meta)
    return out, dropped
