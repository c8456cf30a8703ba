"""Moncrief lines, grafting rays and the Thurston boundary on a genus-2 surface.

Modules
-------
hyp2       Moebius maps, boundary points and oriented geodesics of the upper half-plane
surface    genus-2 holonomy from Fenchel-Nielsen coordinates, curve panel, intersections
twist      twisting numbers along pants curves
graft      pinching laws for curves near grafting rays
thurston   projective convergence of length vectors
spacetime  regular domains in Minkowski 3-space and their cosmological time
cli        experiment runner (``python -m moncrief``)
"""
from .errors import GeometryError

__version__ = "0.1.0"

__all__ = ["GeometryError", "__version__"]
