"""
BD-RIS Channel Estimation - Core Source Package
===============================================
Least-squares estimation of the cascaded channel of a group-connected
beyond-diagonal RIS, with MSE-optimal training codebooks.

Modules:
- linalg: Complex matrix primitives, DFT and Hadamard generators
- codebook: Training codebook construction, validation and export
- channel: Rayleigh channel model, cascaded channel, reciprocity
- estimator: Uplink training, LS estimation, Monte Carlo MSE
- harness: Configuration, power sweeps and the command-line interface
"""

__version__ = '1.0.0'
