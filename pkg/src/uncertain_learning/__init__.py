"""Non-Bayesian social learning with models built from finite evidence."""

__version__ = "0.1.0"
