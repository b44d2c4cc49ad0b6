import sys

import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from bogoliubov.generate import generate
from bogoliubov.nambu import validate_problem

settings.register_profile(
    "default",
    max_examples=40,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")


def random_hermitian(rng, n, scale=1.0):
    Z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return scale * 0.5 * (Z + Z.conj().T)


def random_symmetric(rng, n, scale=1.0):
    Z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return scale * 0.5 * (Z + Z.T)


def random_psd(rng, n):
    Z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return Z @ Z.conj().T


@st.composite
def problems(draw, max_modes=6, g_lo=0.05, g_hi=0.9, kinds=("random", "laplacian", "commutative")):
    kind = draw(st.sampled_from(kinds))
    modes = draw(st.integers(1, max_modes))
    gnorm = draw(st.floats(g_lo, g_hi))
    seed = draw(st.integers(0, 2**31 - 1))
    return generate(kind, modes, gnorm, seed)


seeds = st.integers(0, 2**31 - 1)


@pytest.fixture
def single_mode():
    return validate_problem(np.eye(1), 0.6 * np.eye(1), label="single-mode")


@pytest.fixture
def two_mode():
    return validate_problem(np.diag([1.0, 2.0]), np.diag([0.5, 0.6]), label="two-mode")


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
