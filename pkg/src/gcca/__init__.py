"""Graph canonical correlation analysis (gCCA)."""
__version__ = "0.1.0"
