"""Classical stochastic and quantum evolution on shared scenarios.

Submodules:

- ``fields``: grids, densities, amplitudes, distances, sampling
- ``master_eq``: rate generators, exact propagation, Gillespie trajectories
- ``fokker_planck``: jump moments, conservative FP solver, Euler-Maruyama
- ``schrodinger``: Crank-Nicolson propagation, Born rule, measurement collapse
- ``correspondence``: ground-state/OU matching, spreading laws, de Boer parameter
- ``experiments``: two-slit patterns, spin-pair correlations, CHSH
- ``cli``: the ``dualevo`` scenario runner
"""
__version__ = "0.1.0"
