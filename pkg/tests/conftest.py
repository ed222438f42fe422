"""Shared quadrature fixtures.

Grids are immutable once built, so session scope keeps the heavier tensor
products (d = 3, d = 4) out of every individual test's budget.
"""

from __future__ import annotations

import pytest

from widthlab import GAUSSIAN, UNIFORM_CUBE, QuadratureSpec, TENSOR_GAUSS, make_grid


def _tensor(measure, d, n):
    return make_grid(QuadratureSpec(measure=measure, scheme=TENSOR_GAUSS,
                                    dimension=d, nodes_per_dim=n))


@pytest.fixture(scope="session")
def cube_grid_1d():
    return _tensor(UNIFORM_CUBE, 1, 48)


@pytest.fixture(scope="session")
def cube_grid_2d():
    return _tensor(UNIFORM_CUBE, 2, 24)


@pytest.fixture(scope="session")
def cube_grid_3d():
    return _tensor(UNIFORM_CUBE, 3, 24)


@pytest.fixture(scope="session")
def cube_grid_4d():
    return _tensor(UNIFORM_CUBE, 4, 12)


@pytest.fixture(scope="session")
def gauss_grid_1d():
    return _tensor(GAUSSIAN, 1, 40)


@pytest.fixture(scope="session")
def gauss_grid_2d():
    return _tensor(GAUSSIAN, 2, 40)


@pytest.fixture(scope="session")
def gauss_grid_3d():
    return _tensor(GAUSSIAN, 3, 24)
