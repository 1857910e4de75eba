"""Shared test configuration and fixtures."""
import os
from unittest.mock import patch

import numpy as np
import pytest

from qcs.config.settings import reset_settings
from qcs.model import gen_gaussian_matrix, gen_sparse_signal, measure


@pytest.fixture(autouse=True)
def clean_settings():
    """Every test starts from default settings with no environment overrides."""
    overrides = {k: v for k, v in os.environ.items() if not k.startswith("QCS_")}
    with patch.dict(os.environ, overrides, clear=True):
        reset_settings()
        yield
    reset_settings()


@pytest.fixture
def small_instance():
    """Column-normalized 32 x 64 matrix, a 3-sparse signal and its measurements."""
    phi = gen_gaussian_matrix(32, 64, seed=7)
    x = gen_sparse_signal(64, 3, seed=7, stream=1)
    return phi, x, measure(phi, x)


@pytest.fixture
def standard_instance():
    """The 128 x 256, K = 6 regime used by the Monte Carlo experiments."""
    phi = gen_gaussian_matrix(128, 256, seed=11)
    x = gen_sparse_signal(256, 6, seed=11, stream=1)
    return phi, x, measure(phi, x)


@pytest.fixture
def gaussian_samples():
    return np.random.default_rng(1234).standard_normal(20000)
