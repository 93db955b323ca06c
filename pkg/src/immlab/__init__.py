"""Multigraph constructions and exact immersion search for K_d-immersion-free families."""

__version__ = "0.1.0"
