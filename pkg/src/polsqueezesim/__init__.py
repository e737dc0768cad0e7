"""Simulator and verification library for continuous-variable polarization squeezing"""

__version__ = "0.1.0"
