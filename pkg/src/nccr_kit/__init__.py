"""Exact graded commutative algebra for checking noncommutative crepant
resolutions, depth conditions and tilting certificates."""

__version__ = "0.1.0"
