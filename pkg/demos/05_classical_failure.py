"""
When the classical update goes wrong
====================================

With no evidence for the truth and plenty for a nearby wrong model, the
wrong surrogate is often closer to the truth in KL. A normalized Bayes
update then concentrates on the wrong hypothesis. The uncertain ratio
keeps the true hypothesis at a finite value instead.
"""

import numpy as np

from uncertain_learning.experiments import proposition1_demo
from uncertain_learning.learning import classical_log_beliefs, draw_symbols
from uncertain_learning.models import (
    HypothesisModel,
    ObservationHistory,
    draw_prior_evidence,
    log_uncertain_likelihood_ratio,
)

p_star, p_wrong = np.array([0.6, 0.4]), np.array([0.55, 0.45])
res = proposition1_demo(p_star, p_wrong, R1=100, R2=0, trials=500, seed=0)
print(f"flip probability {res.flip_probability:.3f}, classical failure rate {res.failure_rate:.3f}")

rng = np.random.default_rng(5)
models = [HypothesisModel(draw_prior_evidence(p_wrong, 100, rng), 0), HypothesisModel([0, 0], 1)]
stream = draw_symbols(p_star[None, :], 10_000, rng)[:, 0]
print("classical log beliefs (wrong, true):", classical_log_beliefs(models, stream).round(2))
hist = ObservationHistory.from_symbols(stream, 2)
print("uncertain log ratios (wrong, true):",
      np.round([log_uncertain_likelihood_ratio(md, hist) for md in models], 2))
