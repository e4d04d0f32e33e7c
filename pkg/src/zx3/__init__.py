"""Exact engine for the qutrit stabilizer ZX-calculus."""

__version__ = "0.1.0"
