"""Flag manifolds over semifields: exact Marsh-Rietsch cells, Chamber Ansatz
and the monoid action, with tropical computation by lifting."""

__version__ = "0.1.0"
