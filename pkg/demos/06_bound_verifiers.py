# Numeric verification of every closed-form ingredient of the bounds.
#
# Each verifier re-checks an analytic claim by dense sampling or direct
# evaluation and raises VerificationError with witness values if anything is
# off. The same checks back the `speedscale verify` command.
import numpy as np

from speedscale import (DELTA, PHI_PLUS_1, theta, verify_alpha2_lcr_cases,
                        verify_h_bound, verify_mincran,
                        verify_oracle_equivalence, verify_small_m_cases,
                        verify_subadditivity)
from speedscale.analysis import psi

# 1. The limiting game ratio (z^2 + 2zk)/(2zk - k^2) is minimized at k = delta*z.
for z in (10, 100, 10_000):
    k_star, value = verify_mincran(z)
    print(f"z={z:6d}: k* = {k_star:12.4f} (= delta*z = {DELTA * z:.4f}),"
          f" value = {value:.9f}")

# 2. The greedy overhead term stays at or below 1/2 and never grows with the
#    exponent; at exponent 2 it is exactly 1/2.
print("\ntheta(2, m=3) =", theta(2.0, 3))
for alpha in (2.0, 3.0, 4.0, 6.0):
    report = verify_h_bound(alpha, m_max=100)
    print(f"alpha={alpha}: max theta over m<=100 = {report['max_theta']:.6f}")

# 3. Small-m cases for the simplified policy: every branch bound <= phi + 1.
grid = [round(a, 2) for a in np.arange(2.5, 4.001, 0.25)]
report = verify_small_m_cases(grid, seed=0, samples=25)
worst = max(r["bound"] for r in report["rows"])
print(f"\nsmall-m cases on alpha grid {grid[0]}..{grid[-1]}: "
      f"worst bound {worst:.6f} <= phi+1 = {PHI_PLUS_1:.6f}")

# 4. The exponent-2 case split. Note the quirk at m = 5: the bound at the
#    real endpoint delta*m + 1 pokes above phi + 1 even though the integer
#    candidate ceil(delta*m) is safely below it.
report = verify_alpha2_lcr_cases(range(1, 21))
for row in report["rows"]:
    if row["m"] in (1, 3, 4, 5, 6):
        extra = ""
        if "psi_end" in row:
            extra = f"  psi(delta*m+1)={row['psi_end']:.4f}" + \
                    ("  <-- above phi+1, integer point still fine" if row["psi_end_above"] else "")
        print(f"m={row['m']:2d} [{row['case']:>11s}] bound={row['bound']:.6f}{extra}")
print("psi(5, delta*5 + 1) =", psi(5, DELTA * 5 + 1.0))

# 5. The two offline solvers agree, and clairvoyant profit is sub-additive.
print("\noracle equivalence:", verify_oracle_equivalence(samples=200, seed=1))
print("sub-additivity:    ", verify_subadditivity(samples=200, seed=1))
