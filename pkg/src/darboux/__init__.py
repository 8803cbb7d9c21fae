"""Goursat problem for the Euler-Darboux equation via Abel integrals."""
