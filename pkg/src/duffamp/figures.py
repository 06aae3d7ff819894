"""Render sweep datasets to figure files.

Figures are drawn straight onto an Agg canvas (no pyplot, no global backend
state), so rendering works headless and never interferes with an embedding
application's matplotlib configuration. Each function takes a
:class:`~duffamp.sweep.Dataset` and writes one PNG next to the CSV it was
generated from.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np
from matplotlib.backends.backend_agg import FigureCanvasAgg
from matplotlib.figure import Figure

from .sweep import Dataset, branch_partition

_BRANCH_ORDER = ("lower", "upper", "single", "middle")


def render_dataset(dataset: Dataset, path: str | Path) -> Path:
    """Dispatch on the dataset's quantity and write the figure to ``path``."""
    quantity = dataset.meta.get("quantity")
    if quantity == "response":
        fig = response_figure(dataset)
    elif quantity == "gain_surface":
        fig = surface_figure(dataset, "g", "small-signal gain g")
    elif quantity == "noise_surface":
        fig = surface_figure(dataset, "S", "output noise S (normally ordered)")
    elif quantity == "min_force":
        fig = min_force_figure(dataset)
    else:
        raise ValueError(f"cannot render dataset of quantity {quantity!r}")
    path = Path(path)
    fig.savefig(path, dpi=150)
    return path


def _new_figure(width: float = 6.4, height: float = 4.2) -> Figure:
    fig = Figure(figsize=(width, height))
    FigureCanvasAgg(fig)
    return fig


def response_figure(dataset: Dataset) -> Figure:
    eps_p = dataset.column("eps_p").astype(float)
    n0 = dataset.column("n0").astype(float)
    branch = dataset.column("branch")
    stable = dataset.column("stable").astype(bool)

    fig = _new_figure()
    ax = fig.add_subplot(1, 1, 1)
    for label in _BRANCH_ORDER:
        pick = branch == label
        if not pick.any():
            continue
        order = np.argsort(eps_p[pick], kind="stable")
        style = "--" if not stable[pick].all() else "-"
        ax.plot(eps_p[pick][order], n0[pick][order], style, label=label)
    ax.set_xlabel(r"pump amplitude $\epsilon_p$")
    ax.set_ylabel(r"occupation $n_0$")
    ax.legend(title="branch")
    fig.tight_layout()
    return fig


def surface_figure(dataset: Dataset, value_column: str, label: str) -> Figure:
    partitions, _ = branch_partition(dataset)
    names = [name for name in _BRANCH_ORDER if name in partitions]
    fig = _new_figure(width=4.8 * max(len(names), 1))
    for index, name in enumerate(names):
        part = partitions[name]
        ax = fig.add_subplot(1, len(names), index + 1)
        deltas = part.column("delta").astype(float)
        n0 = part.column("n0").astype(float)
        values = part.column(value_column).astype(float)
        masked = part.column("near_critical").astype(bool)
        values = np.where(masked, np.nan, values)

        dv = np.unique(deltas)
        nv = np.unique(n0)
        grid = np.full((nv.size, dv.size), np.nan)
        row_idx = np.searchsorted(nv, n0)
        col_idx = np.searchsorted(dv, deltas)
        grid[row_idx, col_idx] = values

        mesh = ax.pcolormesh(dv, nv, grid, shading="nearest")
        fig.colorbar(mesh, ax=ax, label=label)
        ax.set_xlabel(r"signal detuning $\delta$")
        ax.set_ylabel(r"occupation $n_0$")
        ax.set_title(f"{name} branch")
    fig.tight_layout()
    return fig


def min_force_figure(dataset: Dataset) -> Figure:
    n0 = dataset.column("n0").astype(float)
    minimum = dataset.column("eps_s_min").astype(float)
    reference = dataset.column("empty_cavity_ref").astype(float)

    fig = _new_figure()
    ax = fig.add_subplot(1, 1, 1)
    ax.plot(n0, minimum, "-", label=r"nonlinear $\epsilon_s^{min}$")
    ax.axhline(reference[0], linestyle="--", color="black",
               label="empty cavity (standard quantum limit)")
    ax.set_xlabel(r"occupation $n_0$")
    ax.set_ylabel(r"minimum detectable force $\epsilon_s^{min}$")
    ax.legend()
    fig.tight_layout()
    return fig
