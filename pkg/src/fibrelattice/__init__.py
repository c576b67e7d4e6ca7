"""Genus-1 fibre combinatorics: weightings, conductrix tables, Q_{4,4,4} lattices."""

__version__ = "0.1.0"
