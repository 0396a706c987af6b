"""Power-weight sweeps showing how far the norm bounds can be pushed.

Both sweep variants drive epsilon to zero along weights omega and sigma
chosen so the ratio of interest grows like char^(1+slope) against the
characteristic alone. The measured log-log slope is compared with the
predicted exponent; all heavy sums run in log2 space with certified tail
bounds, so the rows stay finite down to very small epsilon.
"""

import math

from sparselab import SharpnessConfig, expected_slope, fit_slope, sweep

grid = tuple(2.0**-k for k in range(4, 9))

for p, q, alpha, variant in [
    (2, 4, 0.75, "primal"),
    (2, 4, 0.75, "dual"),
    (4, 8, 0.875, "dual"),
]:
    cfg = SharpnessConfig(p=p, q=q, alpha=alpha, variant=variant, eps_grid=grid)
    rows = sweep(cfg)
    fit = fit_slope(rows, window=4)
    want = expected_slope(p, q, alpha, variant)
    print(f"{variant} sweep, (p, q, alpha) = ({p}, {q}, {alpha}):")
    print("  eps        K      characteristic   ratio          tail")
    for r in rows:
        print(f"  2^{int(round(math.log2(r.eps))):<7d} "
              f"{r.k_top:<6d} {r.char:<16.9g} {r.ratio:<14.9g} {r.tail_bound:.2e}")
    print(f"  fitted slope {fit.slope:.4f} vs predicted {want:.4f} "
          f"(residual {fit.max_residual:.1e})\n")
