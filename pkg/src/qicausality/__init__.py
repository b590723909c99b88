"""Toolkit for the quantum information causality game and its entropic bound."""

__version__ = "0.1.0"
