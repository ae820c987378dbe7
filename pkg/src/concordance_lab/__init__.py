"""Concordance lab: exact lattice dynamics on real algebraic surfaces,
abelian-surface concordance certificates, numerical real-entropy probes
for a K3 deformation family, and Monte Carlo Cauchy-Crofton estimates.
"""

from . import crofton, fdomain, lattice, ns_models, torus, vieta

__all__ = ["crofton", "fdomain", "lattice", "ns_models", "torus", "vieta"]

__version__ = "0.1.0"
