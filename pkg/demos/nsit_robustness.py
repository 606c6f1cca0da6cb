"""
No-signalling in time survives weak measurements
=================================================

The NSIT residual P(2+) - sum_a P(1a, 2+) shrinks like lam^3 for small lam
but stays positive, unlike the inequality-based criteria.
"""

import numpy as np

from macroreal import ModelParams, nsit_delta

for lam in (1.0, 0.5, 0.1, 0.01, 0.001):
    d = nsit_delta(ModelParams(np.pi / 4, np.pi / 2, np.pi / 4, lam))
    print(f"lam={lam:<6} residual={d:.3e}  residual/lam^3={d / lam**3:.4f}")
