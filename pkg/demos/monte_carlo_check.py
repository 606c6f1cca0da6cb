"""
Sampling measurement records
=============================

Simulated runs draw each outcome from the Lüders probabilities of their own
post-measurement state. The frequencies track the analytic joint
probabilities within the expected statistical error.
"""

import math

from macroreal import ModelParams, estimate_inequality
from macroreal.sequences import Event, MeasurementPlan, joint_probability

params = ModelParams(1.0666, math.pi / 2, 1.0083, 1.0)
est = estimate_inequality("wlgi3-4", params, 1_000_000, seed=7)
plan = MeasurementPlan.from_params(params, 3)
for ev, freq, se in est.frequencies:
    p = joint_probability(plan, Event.parse(ev))
    print(f"{ev:<6} sampled={freq:.5f} exact={p:.5f} z={(freq - p) / se:+.2f}")
print(f"estimate {est.estimate:.4f} +- {est.std_error:.4f}")
