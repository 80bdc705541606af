"""qthermo: desk-scale numerics for quantum thermodynamics."""

__version__ = "0.1.0"
