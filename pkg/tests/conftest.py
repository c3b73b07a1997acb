import numpy as np
import pytest

from riskengine import GjrParams, filter_returns
from riskengine.diagnostics import diagnostics_row
from riskengine.gjr_garch import FitResult


def make_fit_result(params: GjrParams, returns: np.ndarray) -> FitResult:
    """FitResult wrapper around given params, without running the optimizer."""
    filtered = filter_returns(returns, params)
    return FitResult(
        params=params,
        filter=filtered,
        converged=True,
        iterations=0,
        residual_diagnostics=diagnostics_row(filtered.z, lags=12, demean_squares=False),
    )


@pytest.fixture
def btc_like_params() -> GjrParams:
    """Parameter magnitudes typical of a crypto daily-return fit."""
    return GjrParams(
        mu=0.002, phi=-0.09, omega=1.3e-5,
        alpha=0.27, gamma=-0.22, beta=0.85,
        m=3.24, nu=0.24,
    )
