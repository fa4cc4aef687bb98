"""Simulation and verification toolkit for iterating U = I_s G.

Closed-form eigenphase predictions (``spectral``), an exact secular-equation
oracle (``oracle``), and the two special cases: amplitude amplification
(``grover``) and Fourier-free phase estimation (``phasest``).
"""
from ._accel import BACKEND
from .operators import InstanceError, ProblemInstance, PhaseSpectrum, StartState

__version__ = "0.1.0"

__all__ = ["BACKEND", "InstanceError", "PhaseSpectrum", "ProblemInstance", "StartState", "__version__"]
