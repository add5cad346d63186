"""Shared fixtures: the default bump-well eigenpair and derived states."""

import pytest

from herbst import (PhysParams, QuadGrid, bump_potential, leading_eigenpair,
                    s_wave_reduce, synthetic_zero_overlap_state)


@pytest.fixture(scope="session")
def bump():
    return bump_potential()


@pytest.fixture(scope="session")
def grid200():
    return QuadGrid.gauss_legendre(200, 1.0)


@pytest.fixture(scope="session")
def state200(bump, grid200):
    """Leading threshold eigenpair of the default bump well at n=200."""
    p = PhysParams(m=1.0, E=0.0)
    return leading_eigenpair(s_wave_reduce(bump, p, grid200))


@pytest.fixture(scope="session")
def zero_overlap_state(bump, grid200):
    """Synthetic sign-balanced state with vanishing first-order overlap."""
    return synthetic_zero_overlap_state(bump, grid200)
