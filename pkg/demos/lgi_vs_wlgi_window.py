"""
Wigner and correlator inequalities disagree
============================================

The n-term LGI needs lam > sqrt((n-2) / (n cos(pi/n))), which is never
below 0.816. The Wigner catalog is violated already near 0.69, so there is a
window where only the Wigner form detects non-classicality.
"""

from macroreal import catalog_max, critical_lambda, lgi_critical_lambda, lgi_max

for n in (3, 4, 5, 10, 50):
    print(f"LGI n={n:<2}  lam_c={lgi_critical_lambda(n):.6f}")

print(f"WLGI wlgi3-4 lam_c={critical_lambda('wlgi3-4', (1.0666, 1.5707963, 1.0083)).value:.6f}")

lam = 0.75
best = catalog_max(lam)
k3, _ = lgi_max(3, lam)
print(f"at lam={lam}: best Wigner value {best.best_value:+.4f} ({best.spec_name}), K3 - 1 = {k3 - 1:+.4f}")
