"""
Single-carrier rounds on either side of the threshold
=====================================================

One shared pair is repeatedly checked against fresh carriers that passed
through the same channel.  Whether the fidelity climbs or collapses depends
only on how ``p00`` compares with the heavier error row.
"""

import numpy as np

from caepp.state_model import from_marginal_params, marginals
from caepp.single_carrier import closed_form_fidelity, converges, trajectory

# channels parametrised by p00 and the share of error mass in shift row 1
for p0, asym in [(0.33, 0.5), (0.34, 0.5), (0.34, 0.48), (0.51, 0.01)]:
    ch = from_marginal_params(p0, asym)
    traj = trajectory(ch, 200)
    f = traj.fidelities
    print(f"p0={p0} asym={asym} u={np.round(marginals(ch).u, 3)} converges={converges(ch)}")
    print("   F at rounds 1, 10, 50, 200:", np.round(f[[0, 9, 49, 199]], 4))

# p00 beats u1 but not u2, so the early growth is transient
ch = from_marginal_params(0.34, 0.48)
f = trajectory(ch, 60).fidelities
print("\n(0.34, 0.48): rises until round", int(np.argmax(f)) + 1, "then decays")

# the closed form keeps working far past anything worth iterating
u = marginals(from_marginal_params(0.51, 0.01)).u
for n in (10, 100, 10**4):
    print(f"N={n:>6}  F_N={closed_form_fidelity(0.51, u, n):.12f}")
