"""Desk-scale controllable multi-subject image generation."""

__version__ = "0.1.0"
