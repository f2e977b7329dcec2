"""Low-degree detection analysis for correlated Erdős–Rényi graph pairs."""

__version__ = "0.1.0"
