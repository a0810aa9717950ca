"""
Distributed belief dynamics over a time-varying directed graph.

Agents do not store beliefs directly. Each keeps a push-sum weight ``y``
and, per hypothesis, ``phi = y * log(mu)``. One synchronous round is

    y'   = A y
    phi' = A phi + log_ell        (log_ell from the symbol seen this round)

and the log-belief is recovered as ``phi / y``. Beliefs are not normalized
across hypotheses.

Two entry points share this recursion: :func:`network_step` advances a
:class:`NetworkState` of explicit agents one round at a time, and
:func:`simulate` runs many rounds on arrays. Fed the same generator they
consume random numbers identically and agree to rounding.
"""

from dataclasses import dataclass, field

import numpy as np
from scipy.special import logsumexp

from .models import (
    HypothesisModel,
    ObservationHistory,
    log_ell_step,
    surrogate_distribution,
)
from .probmath import as_probability_vector


def _cdf(p):
    c = np.cumsum(p)
    c[-1] = 1.0
    return c


def symbols_from_uniforms(u, cdf):
    """Inverse-CDF sampling of symbols; ``u`` in [0, 1)."""
    return np.minimum(np.searchsorted(cdf, u, side="right"), cdf.size - 1)


@dataclass
class AgentState:
    id: int
    models: list
    signal_dist: np.ndarray
    y: float = 1.0
    phi: np.ndarray = None
    history: ObservationHistory = None

    def __post_init__(self):
        self.signal_dist = as_probability_vector(self.signal_dist)
        K = self.signal_dist.size
        if any(m.symbol_count != K for m in self.models):
            raise ValueError("every hypothesis model must cover the agent's symbol set")
        if self.phi is None:
            self.phi = np.zeros(len(self.models))
        self.phi = np.asarray(self.phi, dtype=float)
        if self.history is None:
            self.history = ObservationHistory.empty(K)
        self._cdf = _cdf(self.signal_dist)

    @classmethod
    def from_counts(cls, id, prior_counts, signal_dist, log_mu0=None):
        """Build an agent from an ``(H, K)`` array of prior evidence."""
        models = [HypothesisModel(z, hypothesis_id=h) for h, z in enumerate(prior_counts)]
        phi = None if log_mu0 is None else np.asarray(log_mu0, dtype=float).copy()
        return cls(id, models, signal_dist, phi=phi)

    @property
    def symbol_count(self):
        return self.signal_dist.size

    def log_beliefs(self):
        return self.phi / self.y


def observe(agent, rng):
    """Draw the agent's next private symbol and record it in its history."""
    symbol = int(symbols_from_uniforms(rng.random(), agent._cdf))
    agent.history.record(symbol)
    return symbol


def log_belief(agent, hypothesis):
    return float(agent.phi[hypothesis] / agent.y)


@dataclass
class NetworkState:
    agents: list
    graph: object
    rng: np.random.Generator
    step: int = 0
    symbols: list = field(default_factory=list)

    def __post_init__(self):
        if len(self.agents) != self.graph.agent_count:
            raise ValueError(
                f"{len(self.agents)} agents but the graph has {self.graph.agent_count} nodes"
            )

    @property
    def y(self):
        return np.array([a.y for a in self.agents])

    def log_beliefs(self):
        """``(m, H)`` array of current log-beliefs."""
        return np.array([a.log_beliefs() for a in self.agents])


def network_step(state):
    """
    Advance the network one synchronous round, in place.

    All neighbor states are read before any agent commits, then every agent
    observes one symbol and folds its per-step log-likelihood factor into
    ``phi``. Returns `state` for chaining.
    """
    A = state.graph.weight_matrix(state.step)
    y = np.array([a.y for a in state.agents])
    phi = np.array([a.phi for a in state.agents])
    new_y = A @ y
    new_phi = A @ phi
    round_symbols = []
    for i, agent in enumerate(state.agents):
        round_symbols.append(observe(agent, state.rng))
        K = agent.symbol_count
        for h, model in enumerate(agent.models):
            new_phi[i, h] += log_ell_step(model, agent.history, K)
    for i, agent in enumerate(state.agents):
        agent.y = float(new_y[i])
        agent.phi = new_phi[i]
    state.symbols.append(round_symbols)
    state.step += 1
    return state


# -- array engine ---------------------------------------------------------------


def log_ell_table(prior_counts, symbols):
    """
    Per-step log factors for every agent and hypothesis.

    Parameters
    ----------
    prior_counts : ndarray, shape (m, H, K)
    symbols : ndarray of int, shape (T, m)

    Returns
    -------
    ndarray, shape (T, m, H)
        Entry ``[t-1, i, h]`` is the log factor agent ``i`` applies to
        hypothesis ``h`` after its ``t``-th observation.
    """
    prior_counts = np.asarray(prior_counts, dtype=np.int64)
    symbols = np.asarray(symbols)
    m, H, K = prior_counts.shape
    T = symbols.shape[0]
    onehot = symbols[:, :, None] == np.arange(K)
    counts = np.cumsum(onehot, axis=0, dtype=np.int64)
    n_s = np.take_along_axis(counts, symbols[:, :, None], axis=2)[:, :, 0]
    # z_s[t, i, h] = prior count of the symbol agent i saw at step t
    z_s = prior_counts[np.arange(m)[None, :, None], np.arange(H)[None, None, :], symbols[:, :, None]]
    R = prior_counts.sum(axis=2)
    t = np.arange(1, T + 1)
    return np.log1p(z_s / n_s[:, :, None]) - np.log1p(R[None, :, :] / (K + t - 1)[:, None, None])


def draw_symbols(signal_dists, steps, rng):
    """``(steps, m)`` symbol draws, one uniform per agent per step."""
    signal_dists = np.asarray(signal_dists, dtype=float)
    u = rng.random((steps, signal_dists.shape[0]))
    out = np.empty(u.shape, dtype=np.int64)
    for i, p in enumerate(signal_dists):
        out[:, i] = symbols_from_uniforms(u[:, i], _cdf(as_probability_vector(p)))
    return out


@dataclass
class Trajectory:
    """
    Output of :func:`simulate`.

    ``log_beliefs[k-1]`` and ``y[k-1]`` hold the state after round ``k``.
    """

    log_beliefs: np.ndarray
    y: np.ndarray
    symbols: np.ndarray

    @property
    def steps(self):
        return self.log_beliefs.shape[0]

    def to_csv_rows(self):
        """Rows ``(k, agent, hypothesis, log_belief, y)`` for k = 1..T."""
        T, m, H = self.log_beliefs.shape
        for k in range(T):
            for i in range(m):
                for h in range(H):
                    yield (k + 1, i, h, float(self.log_beliefs[k, i, h]), float(self.y[k, i]))


def simulate(prior_counts, signal_dists, graph, steps, rng, log_mu0=None, symbols=None):
    """
    Run `steps` rounds of the belief dynamics on arrays.

    Parameters
    ----------
    prior_counts : array_like, shape (m, H, K)
        Prior evidence of every agent for every hypothesis.
    signal_dists : array_like, shape (m, K)
        Distribution each agent's private symbols are drawn from.
    graph : GraphSequence
    steps : int
    rng : numpy.random.Generator
        Only used when `symbols` is not given.
    log_mu0 : array_like, shape (m, H), optional
        Initial log-beliefs; zero by default.
    symbols : array_like of int, shape (steps, m), optional
        Pre-drawn observation streams.

    Returns
    -------
    Trajectory
    """
    prior_counts = np.asarray(prior_counts, dtype=np.int64)
    m, H, _ = prior_counts.shape
    if graph.agent_count != m:
        raise ValueError(f"graph has {graph.agent_count} nodes but evidence covers {m} agents")
    if symbols is None:
        symbols = draw_symbols(signal_dists, steps, rng)
    symbols = np.asarray(symbols, dtype=np.int64)
    L = log_ell_table(prior_counts, symbols)

    phi = np.zeros((m, H)) if log_mu0 is None else np.array(log_mu0, dtype=float)
    y = np.ones(m)
    out_b = np.empty((steps, m, H))
    out_y = np.empty((steps, m))
    for k in range(steps):
        A = graph.weight_matrix(k)
        y = A @ y
        phi = A @ phi + L[k]
        out_y[k] = y
        out_b[k] = phi / y[:, None]
    return Trajectory(out_b, out_y, symbols)


# -- classical baseline -----------------------------------------------------------


def classical_update(belief, symbol, models, K=None):
    """
    One normalized Bayes-style reweighting by the surrogate likelihoods.

    Parameters
    ----------
    belief : array_like
        Strictly positive distribution over hypotheses.
    symbol : int
    models : sequence of HypothesisModel
    K : int, optional
        Symbol count, checked against the models.
    """
    belief = as_probability_vector(belief, atol=1e-9)
    if np.any(belief <= 0):
        raise ValueError("classical_update needs a strictly positive belief")
    log_post = log_classical_update(np.log(belief), symbol, models, K)
    return np.exp(log_post)


def log_classical_update(log_belief, symbol, models, K=None):
    """:func:`classical_update` on log-beliefs; stays finite where probabilities underflow."""
    if K is not None and any(md.symbol_count != K for md in models):
        raise ValueError("models do not match the symbol count K")
    lik = np.array([surrogate_distribution(md)[symbol] for md in models])
    w = np.asarray(log_belief, dtype=float) + np.log(lik)
    return w - logsumexp(w)


def classical_log_beliefs(models, symbols, log_mu0=None):
    """
    Final log-beliefs after running :func:`classical_update` over a stream.

    The normalized product of likelihoods only depends on the symbol
    histogram, so this is evaluated in one shot.
    """
    K = models[0].symbol_count
    counts = np.bincount(np.asarray(symbols, dtype=np.int64), minlength=K)
    log_lik = np.log(np.array([surrogate_distribution(md) for md in models]))
    w = log_lik @ counts
    if log_mu0 is not None:
        w = w + np.asarray(log_mu0, dtype=float)
    return w - logsumexp(w)
