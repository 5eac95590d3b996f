"""Ciphertext-cost models and circuit builders for garbled modular arithmetic."""
__version__ = "0.1.0"
