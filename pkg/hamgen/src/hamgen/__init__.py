"""Molecular fixture generator for small diatomics in a minimal basis."""

__all__ = ["sto3g", "scf", "qubit", "cli"]
