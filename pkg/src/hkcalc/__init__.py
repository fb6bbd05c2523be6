"""Exact Hilbert-Kunz functions, multiplicities and F-signatures over F_p."""

__version__ = "0.1.0"
ENGINE_VERSION = "hkcalc-engine-1"
