"""Simulation and verification of non-adiabatic geometric gates on trapped ions."""
from . import errors, evolve, gates, model, phase, pulse, qcore

__version__ = "0.1.0"

__all__ = ["errors", "evolve", "gates", "model", "phase", "pulse", "qcore", "__version__"]
