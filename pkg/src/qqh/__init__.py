"""Quantum cohomology of smooth quadrics: exact invariants, characteristic
classes, flat sections and asymptotic checks."""
from __future__ import annotations

from qqh.cohring import CohClass, QuadricSpace, basis_class, cup, pairing

__all__ = ["CohClass", "QuadricSpace", "basis_class", "cup", "pairing"]
__version__ = "0.1.0"
