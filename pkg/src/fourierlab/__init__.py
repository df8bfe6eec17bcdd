"""Desk-scale simulation laboratory for quantum Fourier transforms and
abelian hidden-subgroup algorithms.

The package simulates everything on explicit dense statevectors: circuit
builders for the QFT over Z_{2^n}, four strategies for the QFT over an
arbitrary modulus, Fourier-sampling and period-finding procedures, hidden
subgroup solvers over (Z_2)^n, finite abelian groups, Z and R, and a
numerical harness that checks the quantitative error bounds these
constructions are designed to meet.
"""

__version__ = "0.1.0"
