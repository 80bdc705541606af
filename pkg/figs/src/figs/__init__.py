"""Figure scripts over qthermo CSV artifacts."""

from .recipes import RECIPES, FigureData, RecipeError, Series, render

__version__ = "0.1.0"

__all__ = ["RECIPES", "FigureData", "RecipeError", "Series", "render",
           "__version__"]
