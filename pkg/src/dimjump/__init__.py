"""Lifted-product CSS codes over group algebras, homomorphic CNOT chain maps and simulation tools."""

__version__ = "0.1.0"
