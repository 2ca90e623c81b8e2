"""Mastermind codebreaking with ordered partial models and backtracking."""

from .game import Feedback, GameConfig, Row, Transcript, consistent, enumerate_codes, score
from .models import ColorModel, PlaceModel, at_least, exactly
from .reasoner import HybridSolver, solve, solve_secret

__all__ = [
    "ColorModel",
    "Feedback",
    "GameConfig",
    "HybridSolver",
    "PlaceModel",
    "Row",
    "Transcript",
    "at_least",
    "consistent",
    "enumerate_codes",
    "exactly",
    "score",
    "solve",
    "solve_secret",
]
