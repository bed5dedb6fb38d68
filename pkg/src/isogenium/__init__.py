"""Supersingular isogeny graphs over F_p-bar and F_p at desk scale.

Builds the full supersingular ell-isogeny graph (ell = 2, 3) by BFS over
modular-polynomial roots, the F_p graph of curves and rational isogenies,
extracts the F_p spine, classifies how F_p components merge into it, and
runs distance / diameter / conjugate-pair experiments with reproducible
CSV and JSON outputs.
"""

__version__ = "0.1.0"
