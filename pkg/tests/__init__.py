"""Test package for the augmentation selection toolkit."""

__version__ = '1.0.0'
