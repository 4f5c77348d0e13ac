"""Presentation layer for lossypdc outputs: reads the documented CSV formats
and renders deterministic SVG/PNG figures."""

__version__ = "0.1.0"

from .io import FigureError
from .jobs import FigureJob, load_job
from .render import render
