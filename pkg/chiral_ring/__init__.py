"""
chiral_ring
Steady-state chiral currents of a driven-dissipative superconducting qubit ring
"""
__version__ = "0.1.0"
