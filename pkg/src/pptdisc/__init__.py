"""Multi-copy state discrimination under PPT and separable measurements."""

__version__ = "0.1.0"
