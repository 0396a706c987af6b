"""Stopping-time decomposition of a dyadic chain.

A member becomes principal when its average of f against sigma more than
doubles the average over the principal interval it sits in. For the
density f(x) = x^(-1/2) on the full chain the averages double every three
levels, so the principal set lands exactly on levels 0, 3, 6, 9.

The powered sum of principal averages is then compared pointwise with
(1 - 2^{-p})^{-1} times the maximal function to the p; the ratio never
exceeds one.
"""

from sparselab import (
    LEBESGUE,
    PowerWeight,
    build_principal_cubes,
    chain_family,
    principal_sum_bound,
)

f = PowerWeight(-0.5)
fam = chain_family(9)
stop = build_principal_cubes(fam, f, LEBESGUE)

print("principal intervals:")
for fcube in stop.principals:
    print(f"  {fcube}  (sigma-average of f: {stop.averages[fcube]:.6g})")

q = fam.members[7]
print(f"\nmember {q} is governed by principal {stop.principal_of(q)}")
print(f"children of the root principal: {[str(c) for c in stop.children[stop.principals[0]]]}")

for p in (1.5, 2.0, 3.0):
    rep = principal_sum_bound(stop, f, LEBESGUE, p)
    print(f"p={p}: worst pointwise ratio {rep['max_pointwise_ratio']:.12g}, "
          f"integrated {rep['integrated_ratio']:.12g}  (over {rep['atoms']} atoms)")
