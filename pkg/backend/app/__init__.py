"""Data-driven predictive control: identification, controllers and the benchmark harness"""

__version__ = "0.1.0"
