"""
Movable-Class Slope Stability Toolkit

This package contains the exact-arithmetic engines behind the ``movstab`` CLI:
- lattice_core.py: Néron-Severi lattices, pairings, signatures, Cartier index
- cone_engine.py: Rational polyhedral cones (Eff, Nef, Mov) with dual descriptions
- exact_lp.py: Exact two-phase simplex used for strict feasibility questions
- chern_calculus.py: Degree-2 Chern calculus for sheaf classes on surfaces
- stability_engine.py: Slopes, HN/JH filtrations, walls and stability intervals
- surface_criteria.py: Zariski decomposition, BGI, flatness and torus gates
- bundle.py / report.py / workflow.py / cli.py: problem bundles and reports
- utils.py: Shared rational and matrix helpers
"""

__version__ = "0.1.0"
