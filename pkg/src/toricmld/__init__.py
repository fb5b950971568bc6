"""Exact singularity invariants of toric pairs and toric fibrations."""

__version__ = "0.1.0"
