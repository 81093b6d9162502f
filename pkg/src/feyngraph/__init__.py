"""Symanzik polynomials, graph hypersurfaces, parametric amplitudes and Landau singularities."""

__version__ = "0.1.0"
