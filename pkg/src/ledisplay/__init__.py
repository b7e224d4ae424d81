"""Display-calculus engine for normal lattice expansions.

Generates the display calculus for any two-family connective signature,
recognizes analytic inductive axioms, decides derivability by cut-free
backward proof search where a termination argument applies, and builds
finite polarity-based countermodels for underivable sequents.
"""

__version__ = "0.1.0"
