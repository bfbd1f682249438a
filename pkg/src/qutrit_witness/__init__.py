"""Entanglement witnesses for two qutrits from feasible-region geometry."""

__version__ = "0.1.0"
