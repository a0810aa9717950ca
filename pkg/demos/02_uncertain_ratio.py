"""
The uncertain likelihood ratio
==============================

Lambda compares the evidence-informed predictive of the observed histogram
with the evidence-free one. It factors into per-step terms, is exactly one
without evidence, and settles to a finite limit instead of 0 or infinity.
"""

import numpy as np

from uncertain_learning.models import (
    HypothesisModel,
    ObservationHistory,
    draw_prior_evidence,
    log_asymptotic_limit,
    log_ell_step,
    log_uncertain_likelihood_ratio,
)

rng = np.random.default_rng(1)
p_star = np.array([0.6, 0.4])
right = HypothesisModel(draw_prior_evidence(p_star, 50, rng))
wrong = HypothesisModel(draw_prior_evidence([0.4, 0.6], 50, rng))
blank = HypothesisModel([0, 0])
# 50 draws can be unlucky: the wrong model's histogram may look almost fair
print("evidence: right", right.prior_counts, " wrong", wrong.prior_counts)

hist = ObservationHistory.empty(2)
running = {"right": 0.0, "wrong": 0.0, "blank": 0.0}
models = {"right": right, "wrong": wrong, "blank": blank}
checkpoints = {10, 100, 1000, 10_000, 100_000}
for k, s in enumerate(rng.choice(2, size=100_000, p=p_star), start=1):
    hist.record(s)
    for name, model in models.items():
        running[name] += log_ell_step(model, hist)
    if k in checkpoints:
        print(f"k={k:>6}  " + "  ".join(f"{n}={v:9.4f}" for n, v in running.items()))

# the running sum is the closed form, and the closed form approaches its limit
for name, model in models.items():
    print(f"{name:>5}: closed form {log_uncertain_likelihood_ratio(model, hist):9.4f}"
          f"  limit {log_asymptotic_limit(model, p_star):9.4f}")
