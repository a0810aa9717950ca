import pytest

from uncertain_learning.config import ConfigFileError, load_config, parse_config

VALID = """\
seed: 7
agents: 4
steps: 200
trials: 2
evidence:
  regime: low
graph:
  type: ring
"""


def test_valid_file():
    spec = parse_config(VALID)
    c = spec.experiment
    assert (c.seed, c.agent_count, c.steps, c.trials, c.evidence) == (7, 4, 200, 2, "low")
    assert spec.check_horizon == 200


def test_regime_shorthand():
    assert parse_config("evidence: high\n").experiment.evidence_range == (1000, 10000)


def test_per_agent_distributions():
    text = "agents: 2\ndistributions: [[[0.4, 0.6], [0.6, 0.4]], [[0.3, 0.7], [0.7, 0.3]]]\n"
    c = parse_config(text).experiment
    assert c.signal_dists.tolist() == [[0.6, 0.4], [0.7, 0.3]]


@pytest.mark.parametrize("text,key,line", [
    ("seed: 1\nevidence:\n  regime: explicit\n  range: [-5, 10]\n", "evidence.range", 4),
    ("seed: 1\nagents: 0\n", "agents", 2),
    ("agents: 3\n\ndistributions: [[0.5, 0.6], [0.5, 0.5]]\n", "distributions", 3),
    ("steps: 10\nbogus: 1\n", "bogus", 2),
    ("graph:\n  type: torus\n", "graph", 1),
    ("trials: two\n", "trials", 1),
    ("check:\n  horizon: 0\n", "check.horizon", 2),
])
def test_errors_carry_key_and_line(text, key, line):
    with pytest.raises(ConfigFileError) as info:
        parse_config(text, "exp.yaml")
    assert info.value.key == key
    assert info.value.line == line
    assert str(info.value).startswith(f"exp.yaml:{line}: {key}:")


def test_negative_R_message():
    with pytest.raises(ConfigFileError, match="R must be >= 0"):
        parse_config("evidence:\n  regime: explicit\n  range: [-1, 3]\n")


def test_syntax_error_line():
    with pytest.raises(ConfigFileError) as info:
        parse_config("seed: 1\nagents: [1, 2\n")
    assert info.value.line is not None


def test_not_a_mapping():
    with pytest.raises(ConfigFileError):
        parse_config("- 1\n- 2\n")


def test_load_missing_file(tmp_path):
    with pytest.raises(OSError):
        load_config(tmp_path / "missing.yaml")
