"""Exact-arithmetic composition algebras, Jordan algebras, their graded Lie
algebras, and orbit/rank machinery over the rationals."""

from . import composition, jordan, kkt, linalg, orbits, rootdata, verify

__all__ = [
    "composition",
    "jordan",
    "kkt",
    "linalg",
    "orbits",
    "rootdata",
    "verify",
]
