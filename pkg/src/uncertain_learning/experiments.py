"""
Monte Carlo harness: convergence curves, convergence points and the
failure of the classical update under finite evidence.

All randomness of a trial comes from one integer seed, split into the
named substreams ``evidence``, ``signals`` and ``graph`` so each can be
perturbed without touching the others.
"""

import csv
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import netgraph
from .learning import classical_log_beliefs, draw_symbols, simulate
from .models import HypothesisModel, draw_prior_evidence, log_asymptotic_limit, surrogate_distribution
from .probmath import as_probability_vector, kl_divergence

STREAMS = {"evidence": 0, "signals": 1, "graph": 2}

EVIDENCE_REGIMES = {"low": (0, 100), "high": (1000, 10000)}

DEFAULT_DISTS = ((0.4, 0.6), (0.6, 0.4))


class ConfigError(ValueError):
    """Invalid experiment parameter; `field` names the offending entry."""

    def __init__(self, field, message):
        super().__init__(f"{field}: {message}")
        self.field = field


def substream(seed, label):
    """Independent generator for one named stream of a seed."""
    return np.random.default_rng(np.random.SeedSequence(int(seed), spawn_key=(STREAMS[label],)))


def trial_seeds(master_seed, trials):
    """Per-trial seeds derived from the campaign's master seed."""
    return [
        int(np.random.SeedSequence(int(master_seed), spawn_key=(100, i)).generate_state(1, np.uint64)[0])
        for i in range(trials)
    ]


@dataclass
class ExperimentConfig:
    """
    Everything needed to reproduce a campaign.

    `hypothesis_dists` is either ``(H, K)``, shared by every agent, or
    ``(m, H, K)``. The agents' private symbols come from the true
    hypothesis' row. `evidence` is ``"low"``, ``"high"`` or ``"explicit"``;
    the last uses the inclusive integer range `evidence_range`. When
    `evidence_seed` is set the same evidence is used in every trial.
    """

    agent_count: int = 10
    hypothesis_count: int = 2
    symbol_count: int = 2
    true_hypothesis: int = 1
    hypothesis_dists: np.ndarray = None
    evidence: str = "low"
    evidence_range: tuple = None
    evidence_seed: int = None
    graph: dict = field(default_factory=lambda: {"type": "ring"})
    steps: int = 100_000
    trials: int = 10
    seed: int = 0

    def __post_init__(self):
        m, H, K = self.agent_count, self.hypothesis_count, self.symbol_count
        for name in ("agent_count", "hypothesis_count", "steps", "trials"):
            if int(getattr(self, name)) < 1:
                raise ConfigError(name, f"must be >= 1, got {getattr(self, name)}")
        if K < 2:
            raise ConfigError("symbol_count", f"must be >= 2, got {K}")
        if not 0 <= self.true_hypothesis < H:
            raise ConfigError("true_hypothesis", f"must lie in [0, {H - 1}], got {self.true_hypothesis}")
        if self.seed < 0:
            raise ConfigError("seed", "must be nonnegative")

        dists = np.array(DEFAULT_DISTS if self.hypothesis_dists is None else self.hypothesis_dists, dtype=float)
        if dists.ndim == 2:
            dists = np.broadcast_to(dists, (m,) + dists.shape).copy()
        if dists.shape != (m, H, K):
            raise ConfigError(
                "hypothesis_dists", f"expected shape ({H}, {K}) or ({m}, {H}, {K}), got {dists.shape}"
            )
        for idx in np.ndindex(m, H):
            try:
                as_probability_vector(dists[idx], atol=1e-9)
            except ValueError as exc:
                raise ConfigError("hypothesis_dists", str(exc)) from None
        self.hypothesis_dists = dists

        if self.evidence in EVIDENCE_REGIMES:
            self.evidence_range = EVIDENCE_REGIMES[self.evidence]
        elif self.evidence == "explicit":
            if self.evidence_range is None or len(self.evidence_range) != 2:
                raise ConfigError("evidence_range", "explicit evidence needs a [low, high] range")
            lo, hi = (int(v) for v in self.evidence_range)
            if lo < 0 or hi < 0:
                raise ConfigError("evidence_range", f"prior trial counts R must be >= 0, got [{lo}, {hi}]")
            if lo > hi:
                raise ConfigError("evidence_range", f"low bound {lo} exceeds high bound {hi}")
            self.evidence_range = (lo, hi)
        else:
            raise ConfigError("evidence", f"must be low, high or explicit, got {self.evidence!r}")

        if not isinstance(self.graph, dict) or "type" not in self.graph:
            raise ConfigError("graph", "must be a mapping with a 'type' entry")

    @property
    def signal_dists(self):
        """``(m, K)`` distributions of the agents' private symbols."""
        return self.hypothesis_dists[:, self.true_hypothesis, :]

    def build_graph(self, seed=None):
        try:
            return netgraph.graph_from_spec(self.graph, self.agent_count, seed)
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError("graph", str(exc)) from None

    def to_dict(self):
        return {
            "agent_count": self.agent_count,
            "hypothesis_count": self.hypothesis_count,
            "symbol_count": self.symbol_count,
            "true_hypothesis": self.true_hypothesis,
            "hypothesis_dists": self.hypothesis_dists.tolist(),
            "evidence": self.evidence,
            "evidence_range": list(self.evidence_range),
            "evidence_seed": self.evidence_seed,
            "graph": self.graph,
            "steps": self.steps,
            "trials": self.trials,
            "seed": self.seed,
        }


def draw_evidence(config, rng):
    """Prior evidence ``(m, H, K)``, with ``R`` uniform on the regime's range."""
    m, H, K = config.agent_count, config.hypothesis_count, config.symbol_count
    lo, hi = config.evidence_range
    R = rng.integers(lo, hi + 1, size=(m, H))
    Z = np.empty((m, H, K), dtype=np.int64)
    for i, h in np.ndindex(m, H):
        Z[i, h] = draw_prior_evidence(config.hypothesis_dists[i, h], R[i, h], rng)
    return Z


def limit_targets(prior_counts, signal_dists):
    """
    Network-wide limit of every agent's log-belief, one value per hypothesis:
    the equal-weight average over agents of the log uncertain likelihood
    ratio limits.
    """
    prior_counts = np.asarray(prior_counts)
    m, H, _ = prior_counts.shape
    vals = np.array(
        [[log_asymptotic_limit(HypothesisModel(prior_counts[i, h]), signal_dists[i]) for h in range(H)]
         for i in range(m)]
    )
    return vals.mean(axis=0)


@dataclass
class TrialResult:
    """
    ``errors[k-1, h]`` is the mean over agents of ``|log_belief - target|``
    after round ``k``; ``final_points[h]`` is the mean log-belief at the end.
    """

    seed: int
    errors: np.ndarray
    final_points: np.ndarray
    targets: np.ndarray
    final_log_beliefs: np.ndarray
    prior_counts: np.ndarray


def run_trial(config, trial_seed):
    """Draw evidence, simulate `config.steps` rounds and score against the limit."""
    if config.evidence_seed is not None:
        ev_rng = substream(config.evidence_seed, "evidence")
    else:
        ev_rng = substream(trial_seed, "evidence")
    Z = draw_evidence(config, ev_rng)
    graph_seed = int(substream(trial_seed, "graph").integers(2**63))
    graph = config.build_graph(graph_seed)
    traj = simulate(Z, config.signal_dists, graph, config.steps, substream(trial_seed, "signals"))
    targets = limit_targets(Z, config.signal_dists)
    with np.errstate(invalid="ignore"):
        errors = np.abs(traj.log_beliefs - targets[None, None, :]).mean(axis=1)
    final = traj.log_beliefs[-1]
    return TrialResult(int(trial_seed), errors, final.mean(axis=0), targets, final.copy(), Z)


def _stderr(x, axis=0):
    n = x.shape[axis]
    if n < 2:
        return np.zeros(np.delete(x.shape, axis))
    return x.std(axis=axis, ddof=1) / np.sqrt(n)


@dataclass
class CampaignResult:
    config: ExperimentConfig
    seeds: list
    trials: list
    mean_error: np.ndarray
    error_stderr: np.ndarray
    mean_final_point: np.ndarray
    final_point_stderr: np.ndarray

    def curve_rows(self):
        T, H = self.mean_error.shape
        for k in range(T):
            for h in range(H):
                yield k + 1, h, float(self.mean_error[k, h]), float(self.error_stderr[k, h])

    def table_rows(self):
        for h in range(self.mean_final_point.size):
            yield (self.config.evidence, self.config.agent_count, h,
                   float(self.mean_final_point[h]), float(self.final_point_stderr[h]))

    def crossing_time(self, hypothesis, threshold):
        return crossing_time(self.mean_error[:, hypothesis], threshold)


def _run_one(args):
    config, seed = args
    return run_trial(config, seed)


def run_campaign(config, workers=1):
    """
    Run ``config.trials`` independent trials and average them.

    Trials may be spread over `workers` processes; results are always
    reduced in trial order.
    """
    seeds = trial_seeds(config.seed, config.trials)
    if workers > 1 and len(seeds) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            trials = list(pool.map(_run_one, [(config, s) for s in seeds]))
    else:
        trials = [run_trial(config, s) for s in seeds]
    errs = np.stack([t.errors for t in trials])
    finals = np.stack([t.final_points for t in trials])
    return CampaignResult(
        config, seeds, trials,
        errs.mean(axis=0), _stderr(errs),
        finals.mean(axis=0), _stderr(finals),
    )


def crossing_time(series, threshold):
    """
    First round ``k`` (1-based) from which `series` stays at or below
    `threshold`; ``None`` if it never settles.
    """
    above = np.nonzero(~(np.asarray(series) <= threshold))[0]
    if above.size == 0:
        return 1
    last = int(above[-1])
    return None if last == len(series) - 1 else last + 2


CURVE_HEADER = ("k", "hypothesis", "mean_error", "stderr")
TABLE_HEADER = ("regime", "m", "hypothesis", "mean_final_point", "stderr")
TRAJECTORY_HEADER = ("k", "agent", "hypothesis", "log_belief", "y")


def write_csv(path, header, rows):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([repr(v) if isinstance(v, float) else v for v in row])


def write_campaign(result, out_dir):
    """Write ``curves.csv`` and ``table.csv``; returns their paths."""
    out = Path(out_dir)
    curves, table = out / "curves.csv", out / "table.csv"
    write_csv(curves, CURVE_HEADER, result.curve_rows())
    write_csv(table, TABLE_HEADER, result.table_rows())
    return curves, table


def write_trajectory(traj, path):
    write_csv(path, TRAJECTORY_HEADER, traj.to_csv_rows())


# -- classical update failure -------------------------------------------------------


@dataclass
class Prop1Result:
    flip_probability: float
    failure_rate: float
    flipped: int
    draws: int


def proposition1_demo(p_star, p_theta1, R1, R2, trials, seed, steps=10_000, threshold=1e-6):
    """
    Estimate how often finite evidence makes a wrong hypothesis look closer
    to the truth, and how often the classical update then abandons the truth.

    Hypothesis 0 is modelled from `R1` draws of `p_theta1`, hypothesis 1
    (the true one) from `R2` draws of `p_star`. A draw is flipped when the
    surrogate of hypothesis 0 is strictly closer in KL to `p_star`. For each
    flipped draw a fresh stream of `steps` symbols from `p_star` is fed to
    the classical update from a uniform start, and a failure is recorded
    when the true hypothesis ends below `threshold`.

    Returns
    -------
    Prop1Result
        `failure_rate` is over flipped draws and is NaN when none flipped.
    """
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    p_star = as_probability_vector(p_star, atol=1e-9)
    p_theta1 = as_probability_vector(p_theta1, atol=1e-9)
    if p_star.shape != p_theta1.shape:
        raise ValueError("p_star and p_theta1 must have the same length")
    ev_rng = substream(seed, "evidence")
    sig_rng = substream(seed, "signals")
    log_threshold = np.log(threshold)
    flipped = failures = 0
    for _ in range(trials):
        models = [
            HypothesisModel(draw_prior_evidence(p_theta1, R1, ev_rng), 0),
            HypothesisModel(draw_prior_evidence(p_star, R2, ev_rng), 1),
        ]
        d_wrong = kl_divergence(p_star, surrogate_distribution(models[0]))
        d_true = kl_divergence(p_star, surrogate_distribution(models[1]))
        if not d_wrong < d_true:
            continue
        flipped += 1
        stream = draw_symbols(p_star[None, :], steps, sig_rng)[:, 0]
        if classical_log_beliefs(models, stream)[1] < log_threshold:
            failures += 1
    rate = failures / flipped if flipped else float("nan")
    return Prop1Result(flipped / trials, rate, flipped, trials)
