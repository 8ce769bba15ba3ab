"""Eventually-constant sequence rings and their flat-cover machinery."""

__version__ = "0.1.0"
