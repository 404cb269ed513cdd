"""Workbench for discrete-timing APTC: terms, rewriting, SOS and equivalences."""

__version__ = "0.1.0"
