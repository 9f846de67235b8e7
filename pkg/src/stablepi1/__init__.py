"""Exact computational-algebra engine for fundamental groups of glued and
quotient surface constructions: finitely presented groups, integer lattices,
torus automorphisms, combinatorial van Kampen gluing, and a verified
scenario catalogue."""

from . import cli, fpgroup, intlin, scenarios, torus, vankampen

__all__ = ["cli", "fpgroup", "intlin", "scenarios", "torus", "vankampen"]
__version__ = "0.1.0"
