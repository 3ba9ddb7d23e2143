"""
Rotating the heaviest MUB line before checking
==============================================

A channel whose identity row is not the heaviest line in phase space is
relabelled by a symplectic map first.  Checks then run in alternating bases.
"""

import numpy as np

from caepp.state_model import from_marginal_params, marginals, mub_weights
from caepp.adaptive import Schedule, mub_preprocess, run_adaptive

ch = from_marginal_params(0.34, 0.48)
w = mub_weights(ch)
for ln, L in zip(w.lines, w.L):
    print(f"{ln.kind:>10}: {L:.4f}")

S, rotated = mub_preprocess(ch)
print("\nrotation", S.as_matrix(), "u before", np.round(marginals(ch).u, 3), "after", np.round(marginals(rotated).u, 3))

schedule = Schedule.interleaved(12, 6)
for check in ("star", "ideal"):
    for pre in (True, False):
        traj = run_adaptive(ch, 12, schedule, check=check, preprocess=pre)
        print(f"check={check:<5} preprocess={pre!s:<5} final F={traj.converged_fidelity:.6f}"
              f"  success={traj.cumulative_success[-1]:.3e}")
