"""Exact toric and combinatorial computations for Losev-Manin type moduli
spaces T^LM_{d,n} of points in projective space."""

__version__ = "0.1.0"
