"""Matplotlib renderers for the recipe kinds.

Rendering is deterministic: fixed figure geometry, no timestamps in the
image metadata, and input rows are plotted in file order.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .recipes import REQUIRED_COLUMNS, FigureRecipe, read_csv

_SAVEFIG = dict(dpi=150, metadata={"Software": None})


def render(recipe: FigureRecipe, out_dir) -> Path:
    """Render one figure to <out_dir>/<figure_id>.png and return the path."""
    required = REQUIRED_COLUMNS[recipe.kind]
    data = {role: read_csv(path, required) for role, path in sorted(recipe.inputs.items())}
    fig, ax = plt.subplots(figsize=(6.4, 4.4))
    if recipe.kind == "ber-overlay":
        _ber_overlay(ax, data)
    elif recipe.kind == "rate-threshold":
        _rate_threshold(ax, data["sweep"], recipe.capacity_overlay)
    elif recipe.kind == "gap-curve":
        _gap_curve(ax, data["sweep"])
    elif recipe.kind == "dg-compare":
        _dg_compare(ax, data, recipe.capacity_overlay)
    else:
        raise ValueError(f"unknown recipe kind {recipe.kind!r}")
    if recipe.logy:
        ax.set_yscale("log")
    if recipe.xlim:
        ax.set_xlim(*recipe.xlim)
    if recipe.ylim:
        ax.set_ylim(*recipe.ylim)
    ax.set_title(recipe.title)
    ax.grid(True, which="both", alpha=0.3)
    ax.legend(loc="best", fontsize=8)
    fig.tight_layout()
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    out_path = out_dir / f"{recipe.figure_id}.png"
    fig.savefig(out_path, **_SAVEFIG)
    plt.close(fig)
    return out_path


_MARKERS = ("o", "s", "^", "v", "D", "x", "+", "*")


def _ber_overlay(ax, data):
    floor = 1e-7  # zero BER plotted at the display floor on the log axis
    for i, (role, cols) in enumerate(data.items()):
        eps = np.asarray(cols["epsilon"])
        ber = np.maximum(np.asarray(cols["ber"]), floor)
        ax.plot(eps, ber, marker=_MARKERS[i % len(_MARKERS)], ms=4, lw=1, label=role)
    ax.set_xlabel("channel erasure probability")
    ax.set_ylabel("bit error rate")


def _rate_threshold(ax, sweep, capacity):
    ppd = np.asarray(sweep["eps_star_ppd"])
    bd = np.asarray(sweep["eps_star_bdpd"])
    ham = np.asarray(sweep["hamming_bound_rate"])
    var = np.asarray(sweep["varshamov_bound_rate"])
    sc = np.asarray(sweep["sc_bound"])
    rate = np.asarray(sweep["rate"])
    ax.plot(ppd, ham, "o-", ms=3, lw=1, label="converse bound (P-PD)")
    ax.plot(ppd, var, "s--", ms=3, lw=1, label="achievable bound (P-PD)")
    ax.plot(bd, ham, "^-", ms=3, lw=1, label="converse bound (BD-PD)")
    ax.plot(bd, var, "v--", ms=3, lw=1, label="achievable bound (BD-PD)")
    ax.plot(ppd, rate, "k.", ms=5, label="design rate (reference code)")
    finite = np.isfinite(sc)
    if finite.any():
        order = np.argsort(sc[finite])
        ax.plot(sc[finite][order], ham[finite][order], ":", lw=1.2,
                label="stability-condition bound")
    if capacity:
        x = np.linspace(0.0, 1.0, 51)
        ax.plot(x, 1.0 - x, color="gray", lw=1, label="capacity 1 - eps")
    ax.set_xlim(0, 1)
    ax.set_ylim(bottom=0)
    ax.set_xlabel("decoding threshold")
    ax.set_ylabel("coding rate")


def _gap_curve(ax, sweep):
    rate = np.asarray(sweep["rate"])
    for col, style, label in (("eps_star_ppd", "o-", "P-PD"),
                              ("eps_star_bdpd", "^--", "BD-PD")):
        eps = np.asarray(sweep[col])
        ax.plot(eps, 1.0 - rate - eps, style, ms=3, lw=1, label=f"gap ({label})")
    ax.set_xlabel("decoding threshold")
    ax.set_ylabel("gap to capacity")


def _dg_compare(ax, data, capacity):
    for i, (role, cols) in enumerate(data.items()):
        feas = np.asarray(cols["feasible"]) > 0
        eps = np.asarray(cols["eps_star"])[feas]
        rate = np.asarray(cols["rate"])[feas]
        beta = cols["beta"][0]
        ax.plot(eps, rate, _MARKERS[i % len(_MARKERS)] + "-", ms=4, lw=1,
                label=f"beta = {beta:g}")
    if capacity:
        x = np.linspace(0.0, 1.0, 51)
        ax.plot(x, 1.0 - x, color="gray", lw=1, label="capacity 1 - eps")
    ax.set_xlabel("decoding threshold")
    ax.set_ylabel("coding rate")
    ax.set_xlim(0, 1)
    ax.set_ylim(bottom=0)
