"""Hiding classical bits in mixtures of Bell states: construction, PPT certification and attack simulation."""

__version__ = "0.1.0"
