"""
Surrogate likelihoods from finite evidence
==========================================

A hypothesis is known only through R draws from its distribution. Under a
uniform Dirichlet prior the posterior predictive of one symbol is the
add-one smoothed histogram.
"""

import numpy as np

from uncertain_learning.models import HypothesisModel, draw_prior_evidence, surrogate_distribution
from uncertain_learning.probmath import kl_divergence, log_dirichlet_multinomial_pmf

rng = np.random.default_rng(0)
p_true = np.array([0.6, 0.4])

# more evidence pulls the surrogate toward the truth
for R in (0, 10, 100, 10_000):
    model = HypothesisModel(draw_prior_evidence(p_true, R, rng))
    q = surrogate_distribution(model)
    print(f"R={R:>6}  counts={model.prior_counts}  surrogate={q.round(4)}  KL={kl_divergence(p_true, q):.2e}")

# the Dirichlet-Multinomial pmf sums to one over all histograms of size n
alpha = np.array([2.5, 0.7, 1.2])
n = 6
total = sum(
    np.exp(log_dirichlet_multinomial_pmf([a, b, n - a - b], alpha, n))
    for a in range(n + 1) for b in range(n + 1 - a)
)
print("sum of DM pmf over histograms:", total)
