"""Spin^G groups, homogeneous spin-G structures, and covariant Cartan calculus.

Layers, bottom up: exact scalars and linear algebra (scalars, exactlinalg),
the Clifford/Spin kernel (clifford), the Spin^G quotient group and its Lie
algebra (groups), finite-dimensional representations with parity machinery
(reps), Klein pairs / isotropy lifts / Nomizu maps (homogeneous), symbolic
coordinate-chart verification of the covariant calculus identities
(expr, chartcalc), and the scene-file + report + CLI surface
(scenefile, report, cli).
"""

__version__ = "0.1.0"
