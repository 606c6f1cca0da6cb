"""
Classical bounds by brute force
================================

A macrorealist model is a mixture of deterministic +-1 assignments. Every
linear criterion is therefore bounded by its extreme over the 2^n vertices,
which we enumerate with exact integers.
"""

from macroreal import certify, certify_catalog, get_spec, residual_terms

print(certify(get_spec("wlgi3-4")))
print(certify(get_spec("lgi:4"), tight=True))

# the chain inequality is a sum of vertex indicators with nonnegative weights
mapping, total = residual_terms(4)
for v, c in mapping.items():
    if c:
        print("".join("+" if s > 0 else "-" for s in v), c)
print("total weight", total)

print(certify_catalog().summary())
