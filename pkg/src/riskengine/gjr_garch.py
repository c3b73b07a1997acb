"""AR(1)-GJR(1,1) dynamics with Pearson type-IV innovations.

Mean and variance recursions:

    r_t     = mu + phi * r_{t-1} + eps_t,            eps_t = sigma_t * z_t
    sigma^2_t = omega + a * eps^2_{t-1}
              + gamma * eps^2_{t-1} * 1{eps_{t-1} < 0}
              + beta * sigma^2_{t-1}

with the indicator loading negative shocks by a + gamma (the leverage
effect).  Innovations z_t follow the standardized Pearson type-IV
distribution, so the conditional log-density of r_t is
log_pdf(z_t) - ln(sigma_t).

Conventions the estimator relies on:

* The likelihood conditions on the first observation (the AR(1) lag);
  filtered output covers t = 2..T, i.e. T-1 usable points.
* Presample values: sigma^2_1 = sample variance of the returns,
  eps_1 = r_1 - mu - phi * rbar.
* Maximum likelihood runs over an unconstrained vector theta:
  omega = exp(.), a = exp(.), a + gamma = exp(.) (keeps the
  negative-shock load nonnegative), beta = exp(.), phi = tanh(.),
  m = 2 + exp(.), nu unchanged.  Every simplex point therefore maps to
  a valid model; numeric overflow is penalized with +inf.
* Covariance stationarity a + beta + gamma/2 < 1 is deliberately NOT
  enforced; crypto-scale samples routinely estimate just outside it, so
  violations only emit a warning.

The variance recursion is linear in sigma^2 given the shocks, so the
filter runs through ``scipy.signal.lfilter`` (a compiled direct-form
loop that is arithmetic-for-arithmetic identical to the naive Python
recursion).
"""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.signal import lfilter

from .diagnostics import DiagnosticsRow, diagnostics_row
from .errors import (
    EmptyPoolError,
    NonPositiveVarianceError,
    TooShortError,
    NonFiniteObjectiveError,
)
from .market_data import ReturnSeries
from .numerics import OptimizerOptions, SimplexResult, minimize_simplex
from .pearson4 import Piv

__all__ = [
    "GjrParams",
    "FilterOutput",
    "SimulationState",
    "FitResult",
    "filter_returns",
    "neg_log_likelihood",
    "to_theta",
    "from_theta",
    "fit",
    "simulate",
]

_PARAM_NAMES = ("mu", "phi", "omega", "alpha", "gamma", "beta", "m", "nu")
_MAX_SHAPE = 1e6  # beyond this the type-IV is Gaussian to double precision


@dataclass(frozen=True)
class GjrParams:
    """The eight model parameters; invalid combinations are rejected."""

    mu: float
    phi: float
    omega: float
    alpha: float
    gamma: float
    beta: float
    m: float
    nu: float

    def __post_init__(self) -> None:
        vals = [getattr(self, name) for name in _PARAM_NAMES]
        if not all(math.isfinite(v) for v in vals):
            raise ValueError(f"non-finite parameter in {vals}")
        if self.omega <= 0.0:
            raise ValueError(f"omega must be positive, got {self.omega}")
        if self.alpha < 0.0 or self.beta < 0.0:
            raise ValueError("alpha and beta must be nonnegative")
        if self.alpha + self.gamma < 0.0:
            raise ValueError("alpha + gamma must be nonnegative")
        if abs(self.phi) >= 1.0:
            raise ValueError(f"|phi| must be < 1, got {self.phi}")
        if self.m <= 2.0:
            raise ValueError(f"shape m must exceed 2, got {self.m}")

    @property
    def persistence(self) -> float:
        """a + beta + gamma/2; < 1 means covariance stationary."""
        return self.alpha + self.beta + self.gamma / 2.0

    def innovation_distribution(self) -> Piv:
        return Piv(self.m, self.nu)

    def to_dict(self) -> dict:
        return {name: float(getattr(self, name)) for name in _PARAM_NAMES}

    @classmethod
    def from_dict(cls, payload: dict) -> "GjrParams":
        return cls(**{name: float(payload[name]) for name in _PARAM_NAMES})


@dataclass(frozen=True)
class SimulationState:
    """Terminal filter state seeding a forward simulation."""

    sigma2: float
    eps: float
    last_return: float


@dataclass(frozen=True)
class FilterOutput:
    """Filtered paths over the usable sample t = 2..T (length T-1)."""

    sigma2: np.ndarray = field(repr=False)
    eps: np.ndarray = field(repr=False)
    z: np.ndarray = field(repr=False)
    log_likelihood: float
    last_return: float

    def __post_init__(self) -> None:
        if not (self.sigma2.shape == self.eps.shape == self.z.shape):
            raise ValueError("filter arrays must share one shape")

    def __len__(self) -> int:
        return self.sigma2.shape[0]

    def terminal_state(self) -> SimulationState:
        return SimulationState(
            sigma2=float(self.sigma2[-1]),
            eps=float(self.eps[-1]),
            last_return=float(self.last_return),
        )

    def to_dict(self) -> dict:
        return {
            "sigma2": [float(v) for v in self.sigma2],
            "eps": [float(v) for v in self.eps],
            "z": [float(v) for v in self.z],
            "log_likelihood": float(self.log_likelihood),
            "last_return": float(self.last_return),
        }

    @classmethod
    def from_dict(cls, payload: dict) -> "FilterOutput":
        return cls(
            sigma2=np.asarray(payload["sigma2"], dtype=float),
            eps=np.asarray(payload["eps"], dtype=float),
            z=np.asarray(payload["z"], dtype=float),
            log_likelihood=float(payload["log_likelihood"]),
            last_return=float(payload["last_return"]),
        )


@dataclass(frozen=True)
class FitResult:
    """Maximum-likelihood estimate with its filtered sample attached."""

    params: GjrParams
    filter: FilterOutput
    converged: bool
    iterations: int
    residual_diagnostics: DiagnosticsRow

    def to_dict(self) -> dict:
        return {
            "params": self.params.to_dict(),
            "filter": self.filter.to_dict(),
            "converged": self.converged,
            "iterations": self.iterations,
            "residual_diagnostics": self.residual_diagnostics.to_dict(),
        }

    @classmethod
    def from_dict(cls, payload: dict) -> "FitResult":
        return cls(
            params=GjrParams.from_dict(payload["params"]),
            filter=FilterOutput.from_dict(payload["filter"]),
            converged=bool(payload["converged"]),
            iterations=int(payload["iterations"]),
            residual_diagnostics=DiagnosticsRow.from_dict(payload["residual_diagnostics"]),
        )

    def save(self, path: str | Path) -> None:
        Path(path).write_text(json.dumps(self.to_dict(), sort_keys=True), encoding="utf-8")

    @classmethod
    def load(cls, path: str | Path) -> "FitResult":
        return cls.from_dict(json.loads(Path(path).read_text(encoding="utf-8")))


def _as_return_array(returns) -> np.ndarray:
    if isinstance(returns, ReturnSeries):
        return returns.returns
    return np.asarray(returns, dtype=float)


def _filter_arrays(
    r: np.ndarray,
    mu: float,
    phi: float,
    omega: float,
    alpha: float,
    gamma: float,
    beta: float,
) -> tuple[np.ndarray, np.ndarray]:
    """Innovations for t = 1..T and variances for t = 2..T; no validation."""
    eps = np.empty_like(r)
    eps[0] = r[0] - mu - phi * np.mean(r)
    eps[1:] = r[1:] - mu - phi * r[:-1]
    e2 = eps * eps
    impact = omega + alpha * e2 + gamma * np.where(eps < 0.0, e2, 0.0)
    sigma2_1 = np.var(r, ddof=1)
    tail, _ = lfilter(
        [1.0], [1.0, -beta], impact[:-1], zi=np.asarray([beta * sigma2_1])
    )
    return eps, tail


def filter_returns(returns, params: GjrParams) -> FilterOutput:
    """Run the variance recursion and score the sample.

    log_likelihood = sum over t = 2..T of log_pdf(z_t) - ln(sigma2_t)/2.
    """
    r = _as_return_array(returns)
    if r.shape[0] < 3:
        raise TooShortError(f"need >= 3 returns, got {r.shape[0]}")
    eps, sigma2 = _filter_arrays(
        r, params.mu, params.phi, params.omega, params.alpha, params.gamma, params.beta
    )
    if not np.all(np.isfinite(sigma2)) or np.any(sigma2 <= 0.0):
        raise NonPositiveVarianceError("variance recursion left (0, inf)")
    z = eps[1:] / np.sqrt(sigma2)
    piv = params.innovation_distribution()
    log_likelihood = float(np.sum(piv.log_pdf(z)) - 0.5 * np.sum(np.log(sigma2)))
    return FilterOutput(
        sigma2=sigma2,
        eps=eps[1:],
        z=z,
        log_likelihood=log_likelihood,
        last_return=float(r[-1]),
    )


# --- unconstrained parameterization ----------------------------------------

def to_theta(params: GjrParams) -> np.ndarray:
    """Map parameters to the unconstrained optimization space."""
    return np.array(
        [
            params.mu,
            math.atanh(params.phi),
            math.log(params.omega),
            math.log(params.alpha),
            math.log(params.alpha + params.gamma),
            math.log(params.beta),
            math.log(params.m - 2.0),
            params.nu,
        ]
    )


def _soft_from_theta(theta: np.ndarray) -> tuple | None:
    """Back-transform, or None when the image overflows the domain."""
    mu = theta[0]
    phi = math.tanh(theta[1])
    omega = math.exp(theta[2]) if theta[2] < 709.0 else math.inf
    alpha = math.exp(theta[3]) if theta[3] < 709.0 else math.inf
    neg_load = math.exp(theta[4]) if theta[4] < 709.0 else math.inf
    beta = math.exp(theta[5]) if theta[5] < 709.0 else math.inf
    m = 2.0 + math.exp(theta[6]) if theta[6] < 709.0 else math.inf
    nu = theta[7]
    values = (mu, phi, omega, alpha, neg_load, beta, m, nu)
    if not all(math.isfinite(v) for v in values):
        return None
    if omega <= 0.0 or m <= 2.0 or m > _MAX_SHAPE or abs(phi) >= 1.0:
        return None
    return mu, phi, omega, alpha, neg_load - alpha, beta, m, nu


def from_theta(theta) -> GjrParams:
    """Strict back-transform; raises when theta maps outside the domain."""
    values = _soft_from_theta(np.asarray(theta, dtype=float))
    if values is None:
        raise ValueError("theta maps outside the parameter domain")
    return GjrParams(*values)


def neg_log_likelihood(returns, theta) -> float:
    """-log L at an unconstrained theta; +inf for out-of-domain points."""
    r = _as_return_array(returns)
    theta = np.asarray(theta, dtype=float)
    if not np.all(np.isfinite(theta)):
        return math.inf
    values = _soft_from_theta(theta)
    if values is None:
        return math.inf
    mu, phi, omega, alpha, gamma, beta, m, nu = values
    with np.errstate(over="ignore", invalid="ignore"):
        eps, sigma2 = _filter_arrays(r, mu, phi, omega, alpha, gamma, beta)
        if not np.all(np.isfinite(sigma2)) or np.any(sigma2 <= 0.0):
            return math.inf
        z = eps[1:] / np.sqrt(sigma2)
        piv = Piv(m, nu)
        ll = float(np.sum(piv.log_pdf(z)) - 0.5 * np.sum(np.log(sigma2)))
    return -ll if math.isfinite(ll) else math.inf


# --- estimation -------------------------------------------------------------

def _starting_points(r: np.ndarray, seed: int) -> list[np.ndarray]:
    """Moment-flavored default start plus four seeded perturbations."""
    variance = float(np.var(r, ddof=1))
    base = np.array(
        [
            float(np.mean(r)),
            0.0,                       # phi = 0
            math.log(0.05 * variance), # omega consistent with a=.05, b=.90
            math.log(0.05),
            math.log(0.05),            # gamma = 0
            math.log(0.90),
            math.log(6.0 - 2.0),       # m = 6
            0.0,                       # nu = 0
        ]
    )
    rng = np.random.default_rng(seed)
    spread = np.array([0.1 * float(np.std(r, ddof=1)), 0.3, 0.5, 0.5, 0.5, 0.1, 0.5, 0.3])
    return [base] + [base + rng.normal(0.0, 0.5, 8) * spread for _ in range(4)]


def fit(
    returns,
    opts: OptimizerOptions = OptimizerOptions(max_iterations=3000),
    multistart_seed: int = 0,
    diagnostic_lags: int = 12,
) -> FitResult:
    """Maximum-likelihood fit via multi-start Nelder-Mead.

    Five starts (deterministic given ``multistart_seed``), best negative
    log-likelihood wins with ties broken by start index, then the winner
    is polished by restarting the simplex from it until no further
    improvement.  Non-convergence is reported through the flag, never by
    aborting: the best point found is always returned.
    """
    r = _as_return_array(returns)
    if r.shape[0] < 50:
        raise TooShortError(f"fitting 8 parameters needs >= 50 returns, got {r.shape[0]}")

    def objective(theta: np.ndarray) -> float:
        return neg_log_likelihood(r, theta)

    best: SimplexResult | None = None
    iterations = 0
    for start in _starting_points(r, multistart_seed):
        try:
            result = minimize_simplex(objective, start, opts)
        except NonFiniteObjectiveError:
            continue  # a perturbed start landed on an overflowing model
        iterations += result.iterations
        if best is None or result.value < best.value:
            best = result
    if best is None:
        raise NonFiniteObjectiveError("every starting point had an infinite objective")

    for _ in range(2):  # fresh simplices around the winner escape stagnation
        polished = minimize_simplex(objective, best.argmin, opts)
        iterations += polished.iterations
        improved = polished.value < best.value
        best = polished if polished.value <= best.value else best
        if not improved:
            break

    params = from_theta(best.argmin)
    if params.persistence >= 1.0:
        warnings.warn(
            f"a + beta + gamma/2 = {params.persistence:.4f} >= 1: "
            "the fitted model is not covariance stationary",
            RuntimeWarning,
            stacklevel=2,
        )
    filtered = filter_returns(r, params)
    residual_diag = diagnostics_row(filtered.z, lags=diagnostic_lags, demean_squares=False)
    return FitResult(
        params=params,
        filter=filtered,
        converged=best.converged,
        iterations=iterations,
        residual_diagnostics=residual_diag,
    )


# --- simulation -------------------------------------------------------------

def _as_generator(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    if seed < 0:
        raise ValueError("seed must be nonnegative")
    return np.random.Generator(np.random.Philox(key=np.uint64(seed)))


def simulate(
    params: GjrParams,
    residual_pool,
    horizon: int,
    state: SimulationState,
    seed,
) -> np.ndarray:
    """Bootstrap one future return path of length ``horizon``.

    Each day advances the variance recursion first, draws z* uniformly
    with replacement from the residual pool, and then forms the return
    mu + phi * r_prev + sigma * z*.  Fully deterministic given the seed
    (an int or a prepared ``numpy.random.Generator``).
    """
    pool = np.asarray(residual_pool, dtype=float)
    if pool.size == 0:
        raise EmptyPoolError("residual pool is empty")
    if horizon < 1:
        raise ValueError(f"horizon must be >= 1, got {horizon}")
    rng = _as_generator(seed)
    draws = pool[rng.integers(0, pool.size, size=horizon)]
    sigma2 = state.sigma2
    eps = state.eps
    prev = state.last_return
    path = np.empty(horizon)
    for day in range(horizon):
        e2 = eps * eps
        sigma2 = params.omega + params.alpha * e2 \
            + params.gamma * e2 * (eps < 0.0) + params.beta * sigma2
        eps = math.sqrt(sigma2) * draws[day]
        prev = params.mu + params.phi * prev + eps
        path[day] = prev
    return path
