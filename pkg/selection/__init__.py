"""
Impartial selection mechanisms with exact verification tooling.

The package holds the nomination graph model, a portable seeded generator,
the 2-partition, k-partition and permutation mechanisms, an exact rational
oracle for their selection laws, the performance bound formulas, and a
seeded Monte Carlo estimator.
"""

__version__ = "1.0.0"
