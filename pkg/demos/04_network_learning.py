"""
Distributed learning with uncertain models
==========================================

Ten agents on a directed ring each hold their own finite evidence about
two hypotheses and observe private symbols from the true one. Every
agent's log-belief approaches the same equal-weight average of the
individual limits.
"""

import numpy as np

from uncertain_learning.experiments import limit_targets
from uncertain_learning.learning import simulate
from uncertain_learning.models import draw_prior_evidence
from uncertain_learning.netgraph import ring_snapshot, star_snapshot, static

m = 10
rng = np.random.default_rng(3)
hyp = np.array([[0.4, 0.6], [0.6, 0.4]])  # hypothesis 1 is the truth
Z = np.array([[draw_prior_evidence(p, rng.integers(0, 101), rng) for p in hyp] for _ in range(m)])
signals = np.tile(hyp[1], (m, 1))
target = limit_targets(Z, signals)
print("targets (false, true):", target.round(3))

traj = simulate(Z, signals, static(ring_snapshot(m)), 20_000, np.random.default_rng(4))
for k in (10, 100, 1000, 10_000, 20_000):
    err = np.abs(traj.log_beliefs[k - 1] - target).mean(axis=0)
    print(f"k={k:>6}  mean |log belief - target| = {err.round(4)}")

# a star is unbalanced, yet push-sum still weighs every agent equally
star = simulate(Z, signals, static(star_snapshot(m)), 20_000, np.random.default_rng(4))
print("ring final:", traj.log_beliefs[-1].mean(axis=0).round(3))
print("star final:", star.log_beliefs[-1].mean(axis=0).round(3))
print("star weights:", star.y[-1].round(3))
