"""Fermionic reduced density matrices: measurement planning and purification."""
__version__ = '0.1.0'
