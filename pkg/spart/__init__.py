"""Colored spatial partitions: calculus, categories, tensors and presentations."""
__version__ = "0.1.0"
