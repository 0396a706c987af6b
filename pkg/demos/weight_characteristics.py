"""Weights and their characteristic constants.

Power weights x^beta and piecewise densities share one interface: exact
interval masses. On top of that sit the two-weight characteristic over a
declared family, the one-weight A_{p,q} scan, the Fujii-Wilson maximal
density constant, and the exponent feasibility report that decides
whether a norm bound can hold at all.
"""

from sparselab import (
    ExponentConfig,
    LEBESGUE,
    PiecewiseWeight,
    PowerWeight,
    ROOT,
    ainfty,
    chain_family,
    classical_ap,
    feasibility,
    one_weight_apq,
    two_weight_char,
)

w = PowerWeight(-0.5)
print(f"x^-1/2 mass on [0,1): {w.mass(ROOT):.6g} (exact 2)")
bumpy = PiecewiseWeight(2, [4.0, 1.0, 0.25, 1.0])
print("piecewise masses per quarter:", [float(m) for m in bumpy.grid_masses(ROOT, 2)])

# Fujii-Wilson: scans the truncated dyadic maximal function, so the value
# is exact for the declared test set and a lower estimate of the continuum
rep = ainfty(bumpy, depth=8)
print(f"\nainfty(bumpy) = {rep.value:.12g}, attained at {rep.attained_at}")
print("lebesgue is flat:", ainfty(LEBESGUE, depth=6).value)

cfg = ExponentConfig(p=2, q=2, r=1, alpha=1)
chain = chain_family(4)
char = two_weight_char(w, w, cfg, chain)
print(f"\ntwo-weight characteristic on the chain: {char.value:.12g}")
print("  attained at", char.attained_at, "over", char.test_set)

apq = one_weight_apq(PowerWeight(0.25), p=2, q=4, depth=10)
print(f"one-weight A_pq of x^(1/4): {apq.value:.12g} at {apq.attained_at}")
half = PowerWeight(0.5)
print(f"classical A_2 of x^(1/2) on the chain: {classical_ap(half, half.pow(-1.0), 2, chain):.12g}")

print()
for tup in ((2, 2, 1, 1), (2, 4, 2, 0.75), (2, 4, 2, 1)):
    feas = feasibility(ExponentConfig(*tup))
    verdict = "feasible" if feas.feasible else "infeasible"
    print(f"{tup}: {verdict}; defect {feas.defect:+.4g}; {feas.diagnostic}")
