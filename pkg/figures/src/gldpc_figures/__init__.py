"""Figure regeneration for gldpc experiment CSVs."""

from .recipes import FIGURE_IDS, FigureRecipe, SchemaError, read_csv, recipe_for
from .render import render

__all__ = [
    "FIGURE_IDS",
    "FigureRecipe",
    "SchemaError",
    "read_csv",
    "recipe_for",
    "render",
]
