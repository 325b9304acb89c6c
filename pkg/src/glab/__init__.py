"""glab: exact rational toolkit for polyhedral cone geography.

Toric models with exact asymptotic order functions, chamber decompositions
of support cones with attached Proj models, minimal-model chamber walks,
curve-based (non-)finite-generation checks, and Dirichlet fundamental
domains for finite lattice group actions on cones.
"""

__version__ = "0.1.0"
