"""
Uncertain statistical models built from finite prior evidence.

Each hypothesis is known to an agent only through a histogram of prior
trials. Under a uniform Dirichlet prior the model parameters have posterior
Dirichlet(Z + 1), and all likelihood quantities below are posterior
predictive ones.
"""

from dataclasses import dataclass

import numpy as np

from .probmath import (
    as_count_vector,
    as_probability_vector,
    log_beta,
    log_dirichlet_pdf,
)


@dataclass(frozen=True)
class HypothesisModel:
    """Prior evidence one agent holds about one hypothesis."""

    prior_counts: np.ndarray
    hypothesis_id: int = 0

    def __post_init__(self):
        counts = as_count_vector(self.prior_counts)
        if counts.size < 2:
            raise ValueError("a hypothesis model needs at least two symbol categories")
        counts.flags.writeable = False
        object.__setattr__(self, "prior_counts", counts)

    @property
    def prior_total(self):
        return int(self.prior_counts.sum())

    @property
    def symbol_count(self):
        return self.prior_counts.size

    @property
    def is_uninformed(self):
        return self.prior_total == 0


@dataclass
class ObservationHistory:
    """Running histogram of the symbols one agent has observed."""

    counts: np.ndarray
    step: int = 0
    last_symbol: int | None = None

    def __post_init__(self):
        self.counts = as_count_vector(self.counts)
        if int(self.counts.sum()) != self.step:
            raise ValueError(f"counts sum to {int(self.counts.sum())} but step is {self.step}")
        if self.step >= 1:
            if self.last_symbol is None or self.counts[self.last_symbol] < 1:
                raise ValueError("last_symbol must have a positive count once step >= 1")

    @classmethod
    def empty(cls, symbol_count):
        return cls(np.zeros(symbol_count, dtype=np.int64))

    @classmethod
    def from_symbols(cls, symbols, symbol_count):
        hist = cls.empty(symbol_count)
        for s in symbols:
            hist.record(s)
        return hist

    def record(self, symbol):
        symbol = int(symbol)
        if not 0 <= symbol < self.counts.size:
            raise ValueError(f"symbol {symbol} out of range for {self.counts.size} categories")
        self.counts[symbol] += 1
        self.step += 1
        self.last_symbol = symbol

    def copy(self):
        return ObservationHistory(self.counts.copy(), self.step, self.last_symbol)


def posterior_params(model):
    """Dirichlet posterior parameters ``Z + 1`` under a uniform prior."""
    return model.prior_counts.astype(float) + 1.0


def surrogate_likelihood(model, symbol, K=None):
    """
    Posterior predictive probability of a single symbol.

    Equals ``(Z[symbol] + 1) / (R + K)``, the add-one smoothed histogram of
    the prior evidence.
    """
    K = model.symbol_count if K is None else int(K)
    if K != model.symbol_count:
        raise ValueError(f"model has {model.symbol_count} categories, K={K}")
    if not 0 <= symbol < K:
        raise ValueError(f"symbol {symbol} out of range for K={K}")
    return (model.prior_counts[symbol] + 1) / (model.prior_total + K)


def surrogate_distribution(model):
    """Surrogate likelihood of every symbol, as a probability vector."""
    return posterior_params(model) / (model.prior_total + model.symbol_count)


def _check_dims(model, history):
    if history.counts.shape != model.prior_counts.shape:
        raise ValueError(
            f"history has {history.counts.size} categories, model has {model.symbol_count}"
        )


def log_uncertain_likelihood_ratio(model, history):
    """
    Log of the uncertain likelihood ratio of an observed histogram.

    The ratio compares the Dirichlet-Multinomial predictive built from the
    prior evidence against the evidence-free one:

        ln B(Z + N + 1) - ln B(N + 1) - (ln B(Z + 1) - ln B(1))

    It is exactly zero when the model holds no evidence.
    """
    _check_dims(model, history)
    if model.is_uninformed:
        return 0.0
    z = model.prior_counts
    n = history.counts
    ones = np.ones(z.size)
    return (log_beta(z + n + 1.0) - log_beta(n + 1.0)) - (log_beta(z + 1.0) - log_beta(ones))


def log_ell_step(model, history, K=None):
    """
    Log of the per-step factor whose running product is the uncertain
    likelihood ratio.

    `history` must already contain the symbol observed at this step, so
    ``history.counts[history.last_symbol]`` is the post-increment count.
    Written with ``log1p`` so a model without evidence gives exactly 0.
    """
    _check_dims(model, history)
    K = model.symbol_count if K is None else int(K)
    if K != model.symbol_count:
        raise ValueError(f"model has {model.symbol_count} categories, K={K}")
    t = history.step
    if t < 1:
        raise ValueError("log_ell_step needs at least one observed symbol")
    s = history.last_symbol
    n_s = history.counts[s]
    z_s = model.prior_counts[s]
    return float(np.log1p(z_s / n_s) - np.log1p(model.prior_total / (K + t - 1)))


def log_asymptotic_limit(model, p_true):
    """
    Almost-sure limit of the log uncertain likelihood ratio when the
    observed symbols are drawn from `p_true`.

    Equal to ``ln Dir(p_true; Z + 1) - ln Dir(p_true; 1)``. Returns ``-inf``
    if the evidence has mass on a symbol that `p_true` never emits.
    """
    p = as_probability_vector(p_true)
    z = model.prior_counts
    if p.shape != z.shape:
        raise ValueError(f"p_true has {p.size} categories, model has {z.size}")
    if model.is_uninformed:
        return 0.0
    support = z > 0
    if np.any(p[support] == 0):
        return -np.inf
    ones = np.ones(z.size)
    return float(log_beta(ones) - log_beta(z + 1.0) + np.sum(z[support] * np.log(p[support])))


def log_asymptotic_limit_via_densities(model, p_true):
    """Same limit as :func:`log_asymptotic_limit`, as a difference of Dirichlet log densities."""
    alpha = posterior_params(model)
    return log_dirichlet_pdf(p_true, alpha) - log_dirichlet_pdf(p_true, np.ones(alpha.size))


def draw_prior_evidence(p_model, R, rng):
    """Multinomial histogram of `R` trials from `p_model`."""
    p = as_probability_vector(p_model)
    R = int(R)
    if R < 0:
        raise ValueError(f"number of prior trials must be >= 0, got {R}")
    return rng.multinomial(R, p).astype(np.int64)
