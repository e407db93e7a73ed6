"""Pytest configuration and fixtures"""

import numpy as np
import pytest

from backend.app.harness import clear_nominal_cache
from backend.app.plant import BenchmarkName, LtiSystem, benchmark


def make_stable_system(
    rng: np.random.Generator,
    n: int,
    m: int = 1,
    p: int = 1,
    radius: float = 0.9,
) -> LtiSystem:
    """Random system with spectral radius `radius` (generically controllable and observable)"""
    A = rng.standard_normal((n, n))
    A *= radius / max(np.max(np.abs(np.linalg.eigvals(A))), 1e-12)
    B = rng.standard_normal((n, m))
    C = rng.standard_normal((p, n))
    return LtiSystem(A=A, B=B, C=C)


@pytest.fixture
def rng():
    """Seeded generator"""
    return np.random.default_rng(12345)


@pytest.fixture
def stable_system(rng):
    """Third-order SISO plant with spectral radius 0.8"""
    return make_stable_system(rng, n=3, radius=0.8)


@pytest.fixture
def mimo_system(rng):
    """Fourth-order plant with two inputs and two outputs"""
    return make_stable_system(rng, n=4, m=2, p=2, radius=0.85)


@pytest.fixture
def double_integrator_pair():
    """Plant whose second output is not needed to reconstruct the state from the first"""
    return LtiSystem(
        A=[[0.0, 1.0], [0.0, 0.0]],
        B=[[0.0], [1.0]],
        C=[[1.0, 0.0], [1.0, 1.0]],
    )


@pytest.fixture
def pendulum():
    return benchmark(BenchmarkName.INVERTED_PENDULUM)


@pytest.fixture
def two_mass():
    return benchmark(BenchmarkName.TWO_MASS)


@pytest.fixture
def four_tank():
    return benchmark(BenchmarkName.FOUR_TANK)


@pytest.fixture(autouse=True)
def fresh_nominal_cache():
    """Keep cached nominal trajectories from leaking between tests"""
    clear_nominal_cache()
    yield
    clear_nominal_cache()
