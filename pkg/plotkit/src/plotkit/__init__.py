"""Figure generation from simulation CLI output files.

This package never computes physics. It reads the trajectory,
diagnostics, convergence, and summary files published by the simulation
CLI and renders them; the numerical truth lives entirely upstream.
"""

from .readers import (
    ContractError,
    read_convergence,
    read_diagnostics,
    read_summary,
    read_trajectory,
)
from .render import FIGURE_KINDS, FigureSpec, render

__version__ = "0.1.0"

__all__ = [
    "ContractError",
    "FIGURE_KINDS",
    "FigureSpec",
    "read_convergence",
    "read_diagnostics",
    "read_summary",
    "read_trajectory",
    "render",
]
