"""Cayley graphs over finite fields and their cliques."""

__version__ = "0.1.0"
