"""Shared fixtures for isofoliate tests."""

import pytest

from isofoliate.domain.manifold import ManifoldSpec
from isofoliate.lab.grid import SphereGrid
from isofoliate.lab.metric import MetricField


@pytest.fixture
def schwarzschild() -> MetricField:
    """Exact Schwarzschild metric with m = 2 in dimension 3 (horizon at r = 1)."""
    return MetricField(ManifoldSpec(dimension=3, mass=2.0))


@pytest.fixture
def perturbed() -> MetricField:
    """Schwarzschild m = 2 plus a small even perturbation decaying like r^(-2)."""
    spec = ManifoldSpec(dimension=3, mass=2.0, gamma=1.0).with_perturbation(amplitude=0.01)
    return MetricField(spec, seed=0)


@pytest.fixture
def euclidean() -> MetricField:
    """Flat metric in dimension 3."""
    return MetricField.euclidean(3)


@pytest.fixture
def grid() -> SphereGrid:
    """Coarse full sphere grid."""
    return SphereGrid.full(16)
