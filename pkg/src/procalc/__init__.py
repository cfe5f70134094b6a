"""Process-calculus toolkit: CCS to CSPmn translation, m-among-n
synchronisation semantics, elaboration to plain CSP, and strong
bisimulation checking on finite transition systems."""

__version__ = "0.1.0"

from . import syntax, io, semantics, translate, mn2csp, equivalence  # noqa: F401
