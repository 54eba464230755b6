"""SVG figures for the CLI reports.

Uses the object-oriented matplotlib API (no pyplot global state) and pins
the SVG hash salt and date so reruns produce identical files.
"""

from __future__ import annotations

from pathlib import Path
from typing import Mapping, Sequence

import matplotlib
from matplotlib.figure import Figure

matplotlib.rcParams.update(
    {
        "svg.hashsalt": "pqmkz",
        "svg.fonttype": "none",
        "font.size": 9,
        "axes.labelsize": 9,
        "legend.fontsize": 8,
        "axes.spines.top": False,
        "axes.spines.right": False,
    }
)

_SVG_META = {"Date": None, "Creator": None}


def _save(fig: Figure, path: Path) -> Path:
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        fig.savefig(path, format="svg", metadata=_SVG_META, bbox_inches="tight")
    except OSError as exc:
        raise OSError(f"could not write {path}: {exc}") from exc
    return path


def _overlay(ax, x, fx, mx, title: str, label: str) -> None:
    ax.plot(x, fx, color="black", lw=1.2, label="f(x)")
    ax.plot(x, mx, color="tab:red", lw=1.2, ls="--", label=label)
    ax.set_title(title)
    ax.set_xlabel("x")
    ax.legend(loc="best", frameon=False)


def plot_overlay(path, x, fx, mx, title: str, label: str = "operator") -> Path:
    """f and its approximant on one axis."""
    fig = Figure(figsize=(4.5, 3.2))
    _overlay(fig.add_subplot(1, 1, 1), x, fx, mx, title, label)
    return _save(fig, path)


def plot_panel(path, curves: Sequence[tuple[str, Sequence, Sequence, Sequence]], label: str) -> Path:
    """2x2 grid of overlays, one per (title, x, f, Mf) tuple."""
    fig = Figure(figsize=(9.0, 6.4))
    rows = (len(curves) + 1) // 2
    for i, (title, x, fx, mx) in enumerate(curves):
        _overlay(fig.add_subplot(rows, 2, i + 1), x, fx, mx, title, label)
    fig.tight_layout()
    return _save(fig, path)


def plot_loglog(path, xs, series: Mapping[str, Sequence[float]], xlabel: str, title: str) -> Path:
    fig = Figure(figsize=(4.5, 3.2))
    ax = fig.add_subplot(1, 1, 1)
    for name, ys in series.items():
        ax.loglog(xs, ys, marker="o", ms=3, lw=1.0, label=name)
    ax.set_xlabel(xlabel)
    ax.set_title(title)
    ax.legend(loc="best", frameon=False)
    return _save(fig, path)


def plot_density_profiles(path, profiles: Mapping[str, Sequence[tuple[int, float]]], title: str) -> Path:
    fig = Figure(figsize=(4.5, 3.2))
    ax = fig.add_subplot(1, 1, 1)
    for name, prof in profiles.items():
        ns = [pt[0] for pt in prof]
        ds = [pt[1] for pt in prof]
        ax.semilogx(ns, ds, marker="o", ms=3, lw=1.0, label=name)
    ax.set_xlabel("N")
    ax.set_ylabel("violator density")
    ax.set_title(title)
    ax.legend(loc="best", frameon=False)
    return _save(fig, path)
