"""Fiducial-marker precision landing: geometry, controller, simulator and harness."""

__version__ = "0.1.0"
