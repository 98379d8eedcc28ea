"""Exact mixed graded and filtered chain complexes over Q."""

__version__ = "0.1.0"
