"""Exact first-order deformation data for pseudo-Anosov mapping tori."""
from .qfield import QuadField, QuadNum, Series
from .presentation import MappingTorusInput, load_fixture, load_input, parse_input

__version__ = "0.1.0"

__all__ = ["QuadField", "QuadNum", "Series", "MappingTorusInput", "load_fixture", "load_input", "parse_input"]
