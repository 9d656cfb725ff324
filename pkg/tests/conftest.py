import math

import pytest

from tfim_dephasing import ModelParams, make_kgrid


@pytest.fixture
def model():
    """Factory returning (params, grid) for given model parameters."""

    def build(N, lam, g=0.0, omega0=0.0, beta=math.inf):
        params = ModelParams(N=N, lam=lam, g=g, omega0=omega0, beta=beta)
        return params, make_kgrid(params)

    return build
