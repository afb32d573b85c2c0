"""Figure recipes: which CSVs feed which plot, and schema validation.

Recipes never recompute anything; they only read the experiment CSVs
produced by the gldpc CLI and restyle them.  Input files are looked up in
the input directory under conventional names (one entry per role).
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path


class SchemaError(ValueError):
    """Input CSV does not carry the columns the recipe needs."""


@dataclass(frozen=True)
class FigureRecipe:
    figure_id: str
    kind: str  # ber-overlay | rate-threshold | gap-curve | dg-compare
    inputs: dict  # role -> csv path
    capacity_overlay: bool = True
    xlim: tuple | None = None
    ylim: tuple | None = None
    logy: bool = False
    title: str = ""


# role -> conventional file name patterns, per figure id
_CATALOG: dict[str, dict] = {
    "fig3a": dict(kind="ber-overlay", logy=True, capacity_overlay=False,
                  files={"ppd": "fig3a_ppd.csv", "mlpd": "fig3a_mlpd.csv"},
                  title="(2,6), all checks generalized: P-PD vs ML-PD"),
    "fig3b": dict(kind="ber-overlay", logy=True, capacity_overlay=False,
                  files={"ppd": "fig3b_ppd.csv", "mlpd": "fig3b_mlpd.csv"},
                  title="(2,8), all checks generalized: P-PD vs ML-PD"),
    "fig4a": dict(kind="rate-threshold", files={"sweep": "fig4a_sweep.csv"},
                  title="(2,6), d=3: rate bounds vs threshold"),
    "fig4b": dict(kind="gap-curve", files={"sweep": "fig4b_sweep.csv"},
                  title="(2,6), d=3: gap to capacity"),
    "fig5": dict(kind="rate-threshold", files={"sweep": "fig5_sweep.csv"},
                 title="(2,6), d=4: rate bounds vs threshold"),
    "fig6a": dict(kind="rate-threshold", files={"sweep": "fig6a_sweep.csv"},
                  title="(2,7), d=3: rate bounds vs threshold"),
    "fig6b": dict(kind="gap-curve", files={"sweep": "fig6b_sweep.csv"},
                  title="(2,7), d=3: gap to capacity"),
    "fig7a": dict(kind="rate-threshold", files={"sweep": "fig7a_sweep.csv"},
                  title="(2,8): rate bounds vs threshold"),
    "fig7b": dict(kind="rate-threshold", files={"sweep": "fig7b_sweep.csv"},
                  title="(2,15): rate bounds vs threshold"),
    "fig11": dict(kind="dg-compare",
                  files={"beta0": "fig11_beta0.csv", "beta": "fig11_beta03.csv"},
                  title="(3,6) with generalized variables: rate vs threshold"),
    "fig12": dict(kind="dg-compare",
                  files={"beta0": "fig12_beta0.csv", "beta": "fig12_beta03.csv"},
                  title="(3,7) with generalized variables: rate vs threshold"),
    "fig13b": dict(kind="ber-overlay", logy=True, capacity_overlay=False,
                   files={}, glob="fig13b_*.csv",
                   title="(2,6), punctured: P-PD BER"),
}

FIGURE_IDS = tuple(sorted(_CATALOG))

REQUIRED_COLUMNS = {
    "ber-overlay": ("epsilon", "ber"),
    "rate-threshold": ("nu", "rate", "hamming_bound_rate", "varshamov_bound_rate",
                       "eps_star_ppd", "eps_star_bdpd", "sc_bound"),
    "gap-curve": ("nu", "rate", "eps_star_ppd", "eps_star_bdpd"),
    "dg-compare": ("nu", "beta", "rate", "eps_star", "feasible"),
}


def recipe_for(figure_id: str, input_dir) -> FigureRecipe:
    if figure_id not in _CATALOG:
        raise ValueError(f"unknown figure id {figure_id!r}; known: {', '.join(FIGURE_IDS)}")
    entry = _CATALOG[figure_id]
    input_dir = Path(input_dir)
    inputs = {role: input_dir / name for role, name in entry.get("files", {}).items()}
    if "glob" in entry:
        for path in sorted(input_dir.glob(entry["glob"])):
            inputs[path.stem] = path
    if not inputs:
        raise ValueError(f"{figure_id}: no input CSVs found in {input_dir}")
    return FigureRecipe(
        figure_id=figure_id,
        kind=entry["kind"],
        inputs=inputs,
        capacity_overlay=entry.get("capacity_overlay", True),
        logy=entry.get("logy", False),
        title=entry.get("title", figure_id),
    )


def read_csv(path, required: tuple[str, ...]) -> dict[str, list[float]]:
    """Read one gldpc CSV (comment headers allowed) into float columns.

    Raises SchemaError naming the first missing column, and on an empty
    grid (header without rows).
    """
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(path)
    with open(path, newline="") as fh:
        rows = [r for r in csv.reader(ln for ln in fh if not ln.startswith("#")) if r]
    if not rows:
        raise SchemaError(f"{path.name}: no header row")
    header = rows[0]
    for col in required:
        if col not in header:
            raise SchemaError(f"{path.name}: missing column {col!r}")
    if len(rows) == 1:
        raise SchemaError(f"{path.name}: empty grid (no data rows)")
    out: dict[str, list[float]] = {c: [] for c in header}
    for r in rows[1:]:
        for c, v in zip(header, r):
            out[c].append(float(v) if v not in ("", "inf") else float("inf"))
    return out
