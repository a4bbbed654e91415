import warnings

import pytest

from rydfac import ModelParams, make_grid


@pytest.fixture
def damped_params():
    """Reference parameter set with a slow, cleanly fittable decay."""
    return ModelParams(detuning_ratio=1.32, nu=6, sigma_ratio=0.05, xi_ratio=1.25e-3)


@pytest.fixture
def free_params():
    """Coupling-only mode: the potential vanishes identically."""
    return ModelParams(detuning_ratio=0.0, free_rabi=True, nu=6, sigma_ratio=0.05, xi_ratio=1.25e-3)


@pytest.fixture
def coarse_grid():
    return make_grid(2**11, 0.1, 10.5)


@pytest.fixture
def medium_grid():
    return make_grid(2**12, 0.1, 10.5)


def make_params(**kwargs) -> ModelParams:
    """Params for tests that intentionally enter warned regimes."""
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return ModelParams(**kwargs)
