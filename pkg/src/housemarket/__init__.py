"""One-sided matching: housing allocation, housing markets, and distributed top trading cycles."""

__version__ = "0.1.0"
