"""Exact sheaf cohomology on finite topological spaces.

Integer linear algebra throughout: finitely presented abelian groups,
finite posets with down-set opens, flasque resolutions, semi-simplicial
coverings, torsor cocycles with rigidifications, gerbes and a Bockstein
operator.
"""

from . import abgrp, cochain, finsite, gerbe, rtc, semisimp, sheaf, torsor

__all__ = ["abgrp", "finsite", "sheaf", "semisimp", "cochain", "torsor", "rtc", "gerbe"]

__version__ = "0.1.0"
