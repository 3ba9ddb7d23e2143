"""
Star-check rounds under depolarizing noise
==========================================

With ``m`` carriers the shared pair settles to a fixed point whose infidelity
falls off geometrically in ``m`` as long as ``p > 1/3``.
"""

from caepp.mcaepp import decay_params, fixed_point, fixed_point_infidelity, infidelity_bound

p = 0.4
dp = decay_params(p, 1)
print(f"p={p}: per-carrier ratio C1/B1 = {dp.C / dp.B:.5f}")
for m in (10, 20, 30, 40):
    print(f"  m={m:>2}  1-F*={fixed_point_infidelity(p, m):.4e}  bound={infidelity_bound(p, m):.4e}")

# the iterated map reaches the same point, though it needs many rounds
traj = fixed_point(p, 20)
print(f"\niterated to {traj.rounds} rounds, 1-F={1 - traj.converged_fidelity:.4e}")

# at p = 1/3 nothing improves with more carriers
print("\np=1/3:", [round(fixed_point_infidelity(1 / 3, m), 6) for m in (5, 30, 60)])

# close to the threshold the slow mode is very slow
print("p=0.35, m=60: 1-F* =", f"{fixed_point_infidelity(0.35, 60):.4e}")
