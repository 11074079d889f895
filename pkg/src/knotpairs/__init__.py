"""Numerical and symbolic tools around Nielsen equivalence of generating
pairs: an exact free-group engine, an affine-normal-form HNN criterion, a
hyperbolic 3-space kernel, piecewise-geodesic audits, and a Dehn-filling
holonomy solver for 2-bridge knot groups."""

__version__ = "0.1.0"
