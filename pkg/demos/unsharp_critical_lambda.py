"""
How sharp must the measurement be?
===================================

Unsharp effects F = (I + lam Q)/2 blur the outcomes. Below a critical
sharpness the Wigner inequality is no longer violated.
"""

import numpy as np

from macroreal import ModelParams, critical_lambda, evaluate, get_spec

spec = get_spec("wlgi3-4")
point = (1.0666, np.pi / 2, 1.0083)

# the violation at a fixed point grows with lam
for lam in np.linspace(0.5, 1.0, 6):
    value = evaluate(spec, ModelParams(*point, lam)).value
    print(f"lam={lam:.1f}  value={value:+.5f}")

res = critical_lambda("wlgi3-4", point)
print(f"critical sharpness: {res.value:.6f} ({res.iterations} bisection steps)")
