"""Tour of the localized testing constants and their comparability checks."""

import numpy as np

from sparselab import (
    ExponentConfig,
    MeasureEstimateQuery,
    PositiveDyadicOperator,
    PowerWeight,
    ROOT,
    chain_family,
    check_lemma32,
    check_lemma41,
    check_lemma43,
    check_prop31,
    lsu_check,
    testing_T as T,
    testing_Tstar as Tstar,
    verify_thm42,
)

w = PowerWeight(-0.5)
fam = chain_family(2)
cfg = ExponentConfig(p=2, q=2, r=1, alpha=1)

print(f"T  = {T(fam, cfg, w, w):.12g}")
print(f"T* = {Tstar(fam, cfg, w, w):.12g}")

rep = check_prop31(fam, cfg, w, w, seed=1)
print(f"\nnorm^r vs testing sum ({rep.extras['branch']}): "
      f"lhs {rep.lhs:.6g}, rhs {rep.rhs:.6g}, ratio {rep.ratio:.6g}")

# splitting regime needs r strictly between 1 and p
rep32 = check_lemma32(fam, ExponentConfig(p=3, q=3, r=2, alpha=1), np.ones(len(fam)), w, w, seed=1)
print(f"split testing bound: ratio {rep32.ratio:.6g} ({rep32.descriptor})")

op = PositiveDyadicOperator(fam, np.ones(len(fam)))
rep34 = lsu_check(op, 2, 2, w, w, seed=1)
print(f"linear operator norm vs testing sums: ratio {rep34.ratio:.6g}")

rep41 = check_lemma41(fam, np.ones(len(fam)), w, p=2)
print(f"\nsquare-bracket at p=2: lhs {rep41.lhs:.12g}, rhs {rep41.rhs:.12g}, "
      f"ratio {rep41.ratio:.12g} (must sit in [1, sqrt 2])")

rep43 = check_lemma43(chain_family(4), w, w, MeasureEstimateQuery(1, 0, 0), ROOT)
print(f"packed geometric sum vs local value: {rep43.lhs:.6g} vs {rep43.rhs:.6g}")

for alpha in (1.0, 0.5):
    c = ExponentConfig(p=2, q=2, r=1, alpha=alpha)
    rt, rtstar = verify_thm42(fam, c, w, w)
    tag = rt.extras["branch"]
    star = f", T* ratio {rtstar.ratio:.4g}" if rtstar is not None else ""
    print(f"alpha={alpha}: {tag}; T ratio {rt.ratio:.4g}{star}")
