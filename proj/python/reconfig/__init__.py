"""Maxmin reconfiguration toolkit.

Exact rational evaluation of cut/SAT reconfiguration values, brute-force
optimum search, derandomized approximation algorithms, verifier gadgets, and
gap-preserving reductions. All probabilities and values are returned as
`fractions.Fraction`.
"""

from ._reconfig import *  # noqa: F401,F403

__all__ = [name for name in dir() if not name.startswith("_")]
