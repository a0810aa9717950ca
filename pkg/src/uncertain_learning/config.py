"""
YAML experiment files.

A file fully determines a campaign::

    seed: 7
    agents: 10
    hypotheses: 2
    symbols: 2
    true_hypothesis: 1
    steps: 100000
    trials: 10
    distributions: [[0.4, 0.6], [0.6, 0.4]]   # (H, K) or (m, H, K)
    evidence:
      regime: low          # low | high | explicit
      range: [0, 100]      # explicit only
      seed: 123            # optional, freezes evidence across trials
    graph:
      type: ring           # see netgraph.graph_from_spec
    check:
      horizon: 200

Validation failures raise :class:`ConfigFileError` carrying the offending
key and its line number.
"""

from dataclasses import dataclass

import yaml

from .experiments import ConfigError, ExperimentConfig

TOP_KEYS = {
    "seed", "agents", "hypotheses", "symbols", "true_hypothesis", "steps", "trials",
    "distributions", "evidence", "graph", "check",
}

# ExperimentConfig field -> key path in the file
FIELD_PATHS = {
    "agent_count": ("agents",),
    "hypothesis_count": ("hypotheses",),
    "symbol_count": ("symbols",),
    "true_hypothesis": ("true_hypothesis",),
    "hypothesis_dists": ("distributions",),
    "evidence": ("evidence", "regime"),
    "evidence_range": ("evidence", "range"),
    "evidence_seed": ("evidence", "seed"),
    "graph": ("graph",),
    "steps": ("steps",),
    "trials": ("trials",),
    "seed": ("seed",),
}


class ConfigFileError(ValueError):
    def __init__(self, path, key, line, message):
        where = f"{path}:{line}" if line else str(path)
        super().__init__(f"{where}: {key}: {message}" if key else f"{where}: {message}")
        self.key = key
        self.line = line


@dataclass
class RunSpec:
    experiment: ExperimentConfig
    check_horizon: int
    raw: dict


def _key_line(root, keys):
    """1-based line of the deepest key of `keys` present in the node tree."""
    node, line = root, None
    for key in keys:
        if not isinstance(node, yaml.MappingNode):
            break
        for k_node, v_node in node.value:
            if k_node.value == key:
                line = k_node.start_mark.line + 1
                node = v_node
                break
        else:
            break
    return line


def _as_int(value, key):
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(key, f"expected an integer, got {value!r}")
    return value


def parse_config(text, path="<config>"):
    """Parse and validate the YAML source `text`."""
    try:
        root = yaml.compose(text)
        raw = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        line = mark.line + 1 if mark is not None else None
        raise ConfigFileError(path, None, line, f"invalid YAML: {getattr(exc, 'problem', exc)}") from None
    if not isinstance(raw, dict):
        raise ConfigFileError(path, None, 1, "top level must be a mapping")

    def fail(keys, message):
        raise ConfigFileError(path, ".".join(keys), _key_line(root, keys), message)

    for key in raw:
        if key not in TOP_KEYS:
            fail((str(key),), f"unknown key; expected one of {', '.join(sorted(TOP_KEYS))}")

    evidence = raw.get("evidence", {}) or {}
    if isinstance(evidence, str):
        evidence = {"regime": evidence}
    if not isinstance(evidence, dict):
        fail(("evidence",), "must be a regime name or a mapping")
    check = raw.get("check", {}) or {}

    kwargs = {}
    try:
        for field_name, file_key in (
            ("agent_count", "agents"), ("hypothesis_count", "hypotheses"),
            ("symbol_count", "symbols"), ("true_hypothesis", "true_hypothesis"),
            ("steps", "steps"), ("trials", "trials"), ("seed", "seed"),
        ):
            if file_key in raw:
                kwargs[field_name] = _as_int(raw[file_key], field_name)
        if "distributions" in raw:
            kwargs["hypothesis_dists"] = raw["distributions"]
        if "regime" in evidence:
            kwargs["evidence"] = str(evidence["regime"])
        if "range" in evidence:
            rng = evidence["range"]
            if not isinstance(rng, list) or len(rng) != 2:
                raise ConfigError("evidence_range", "must be a two-element list [low, high]")
            kwargs["evidence_range"] = tuple(_as_int(v, "evidence_range") for v in rng)
        if evidence.get("seed") is not None:
            kwargs["evidence_seed"] = _as_int(evidence["seed"], "evidence_seed")
        if "graph" in raw:
            kwargs["graph"] = raw["graph"]
        experiment = ExperimentConfig(**kwargs)
        experiment.build_graph(0)
    except ConfigError as exc:
        keys = FIELD_PATHS.get(exc.field, (exc.field,))
        fail(keys, str(exc).split(": ", 1)[-1])
    except (TypeError, ValueError) as exc:
        fail(("distributions",), str(exc))

    horizon = check.get("horizon", max(200, 10 * experiment.build_graph(0).window))
    if isinstance(horizon, bool) or not isinstance(horizon, int) or horizon < 1:
        fail(("check", "horizon"), f"must be a positive integer, got {horizon!r}")
    return RunSpec(experiment, horizon, raw)


def load_config(path):
    """Read and validate a config file. Raises OSError if it cannot be read."""
    with open(path) as fh:
        text = fh.read()
    return parse_config(text, path)
