"""Spectral sets and translational tiles in Z_p^d."""
