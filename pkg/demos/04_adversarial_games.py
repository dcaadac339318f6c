# The adaptive deadline game: how bad can hidden deadlines make things?
#
# The adversary releases a batch of equal-value jobs, watches how many the
# policy processes in slot 1, then fixes deadlines in the worst way: the
# chosen jobs never expire (they should have been run alone later), the rest
# expire immediately (they should have been batched right now).
from speedscale import (DELTA, PHI_PLUS_1, SQRT2_PLUS_1, FixedCountPolicy,
                        PowerLaw, alpha2_game_ratio, gen_alpha2_lb_instance,
                        gen_sqrt2_lb_instance, run_adversarial_game)

cost = PowerLaw(2.0)

# Sweep the policy's count k at a fixed batch: the best k is near delta*z.
z = 100
print(f"batch of {2 * z} jobs, value {2 * z} each (quadratic cost):")
for k in (10, 40, 62, 90):
    report = run_adversarial_game(FixedCountPolicy(k), gen_alpha2_lb_instance(z), cost)
    print(f"  k={k:3d}: ratio={report.ratio:.4f}  closed form={alpha2_game_ratio(z, k):.4f}")
print(f"  delta*z = {DELTA * z:.1f}")

# min-lcr finds that sweet spot on its own; growing z pushes its ratio to the
# optimum phi + 1.
for z in (10, 100, 1000):
    report = run_adversarial_game("min-lcr", gen_alpha2_lb_instance(z), cost)
    print(f"min-lcr vs z={z:4d}: ratio={report.ratio:.6f}  (phi+1={PHI_PLUS_1:.6f})")

# For any exponent above 2, four jobs at a carefully chosen value force every
# sensible first move (1 or 2 jobs) to the same ratio sqrt(2) + 1.
for alpha in (2.5, 3.0, 4.0):
    template = gen_sqrt2_lb_instance(alpha)
    r1 = run_adversarial_game(FixedCountPolicy(1), template, PowerLaw(alpha)).ratio
    r2 = run_adversarial_game(FixedCountPolicy(2), template, PowerLaw(alpha)).ratio
    print(f"4-job construction, alpha={alpha}: k=1 -> {r1:.9f}, k=2 -> {r2:.9f} "
          f"(sqrt2+1 = {SQRT2_PLUS_1:.9f})")
