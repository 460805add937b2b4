"""Rotational constant mean curvature surfaces and CMC graphs in H^2 x R."""

__version__ = "0.1.0"
