"""Bi-level planning agent: synthesized symbolic abstractions over a
learned low-level world model, transferable across grid-game curricula."""

__version__ = "0.1.0"
