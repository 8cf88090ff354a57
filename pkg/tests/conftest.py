"""Shared fixtures: solved profiles and immersions reused across modules."""

import numpy as np
import pytest

import betalab as bl


@pytest.fixture(autouse=True)
def _no_ambient_seed(monkeypatch):
    # A seed left in the environment would silently change every seeded run.
    monkeypatch.delenv(bl.SEED_ENV_VAR, raising=False)


@pytest.fixture(scope="session")
def prof_beta2():
    return bl.solve_profile(2.0, 1.0, 1.0, 0.5, 6.0, 257)


@pytest.fixture(scope="session")
def imm_beta2(prof_beta2):
    return bl.rotational_immersion(prof_beta2)


@pytest.fixture(scope="session")
def prof_beta0():
    return bl.solve_profile(0.0, 1.0, 1.0, 1.6, 6.0, 257)


@pytest.fixture(scope="session")
def imm_beta0(prof_beta0):
    return bl.rotational_immersion(prof_beta0)


@pytest.fixture(scope="session")
def quad_full():
    return bl.QuadratureSpec(257, 64)


@pytest.fixture(scope="session")
def quad_small():
    return bl.QuadratureSpec(129, 32)


@pytest.fixture(scope="session")
def generic_graph():
    """A tilted symplectic (non-holomorphic, non-Lagrangian) linear graph."""
    a = np.array([[0.4, -0.1], [0.2, 0.3]])
    return bl.linear_graph(a, beta=2.0)
