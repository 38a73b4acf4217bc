"""Exact twisted Hecke algebras attached to regular characters of GL_N(F_q((t)))."""

__version__ = "0.1.0"
