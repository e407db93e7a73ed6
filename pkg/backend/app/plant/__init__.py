"""Ground-truth plants, references, pre-experiment data and benchmarks"""

from .system import LtiSystem, NoiseSpec, simulate
from .reference import ReferenceKind, ReferenceSignal
from .episodes import EpisodeData, ExcitationSpec, collect_episode
from .benchmarks import Benchmark, BenchmarkDefaults, BenchmarkName, benchmark

__all__ = [
    "LtiSystem",
    "NoiseSpec",
    "simulate",
    "ReferenceKind",
    "ReferenceSignal",
    "EpisodeData",
    "ExcitationSpec",
    "collect_episode",
    "Benchmark",
    "BenchmarkDefaults",
    "BenchmarkName",
    "benchmark",
]
