"""Symplectic analysis of multimode Gaussian states.

Decompositions (Williamson, Euler, phase-space Schmidt), local standard
forms and parameter counts, a minimal optical engineering scheme for pure
states, and a seeded typical-entanglement sampler.
"""

__version__ = "0.1.0"
