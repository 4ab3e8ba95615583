"""Moment polytopes of real flag varieties: Kostant polytopes, Horn-Klyachko
systems restricted to symmetric pairs, Bruhat orbit-closure subpolytopes, and
a random-matrix spectral oracle."""

__version__ = "0.1.0"
