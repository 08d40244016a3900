"""Simplicial sets, loop groups, subdivision, Van Est integration and Cech-Deligne cocycles."""

__version__ = "0.1.0"
