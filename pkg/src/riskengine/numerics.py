"""Numerical kernels shared by the statistical layers.

Thin, contract-checked fronts over the mature routines in ``math`` and
``scipy``: real and complex log-gamma, the regularized upper incomplete
gamma (chi-square tail probabilities), adaptive quadrature, bracketed
root finding, and a derivative-free Nelder-Mead minimizer.  Accuracy
contracts are stated here once so downstream tolerances compose.

Objectives passed to the minimizer may return ``+inf`` (never NaN) for
out-of-domain points; the simplex treats ``+inf`` as worse than any
finite value, which implements parameter constraints by penalty.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy import integrate, optimize, special

from .errors import (
    DomainError,
    MaxDepthExceededError,
    NoSignChangeError,
    NonFiniteObjectiveError,
)

__all__ = [
    "OptimizerOptions",
    "SimplexResult",
    "ln_gamma_real",
    "ln_gamma_complex",
    "regularized_gamma_upper",
    "chi_square_sf",
    "integrate_adaptive",
    "find_root_bracketed",
    "minimize_simplex",
]


@dataclass(frozen=True)
class OptimizerOptions:
    """Termination settings for :func:`minimize_simplex`."""

    max_iterations: int = 2000
    tolerance_f: float = 1e-10
    tolerance_x: float = 1e-7
    initial_simplex_scale: float = 0.05

    def __post_init__(self) -> None:
        if self.max_iterations < 1:
            raise DomainError("max_iterations must be >= 1")
        if self.tolerance_f <= 0.0 or self.tolerance_x <= 0.0:
            raise DomainError("tolerances must be positive")
        if self.initial_simplex_scale <= 0.0:
            raise DomainError("initial_simplex_scale must be positive")


@dataclass(frozen=True)
class SimplexResult:
    argmin: np.ndarray
    value: float
    converged: bool
    iterations: int
    n_evaluations: int


def ln_gamma_real(x: float) -> float:
    """ln Gamma(x) for real x > 0.

    Relative error <= 1e-12 on [0.5, 100].
    """
    if not math.isfinite(x) or x <= 0.0:
        raise DomainError(f"ln_gamma_real requires x > 0, got {x}")
    return math.lgamma(x)


def ln_gamma_complex(z: complex) -> complex:
    """Principal branch of ln Gamma(z) for Re z > 0.

    |exp(result) - Gamma(z)| relative error <= 1e-10 for
    Re z in [0.5, 50], |Im z| <= 50.
    """
    z = complex(z)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise DomainError("ln_gamma_complex requires a finite argument")
    if z.real <= 0.0:
        raise DomainError(f"ln_gamma_complex requires Re z > 0, got {z}")
    return complex(special.loggamma(z))


def regularized_gamma_upper(s: float, x: float) -> float:
    """Q(s, x) = Gamma(s, x) / Gamma(s), in [0, 1].

    The chi-square survival function with k degrees of freedom is
    Q(k/2, x/2); see :func:`chi_square_sf`.
    """
    if not math.isfinite(s) or s <= 0.0:
        raise DomainError(f"regularized_gamma_upper requires s > 0, got {s}")
    if not math.isfinite(x) or x < 0.0:
        raise DomainError(f"regularized_gamma_upper requires x >= 0, got {x}")
    return float(special.gammaincc(s, x))


def chi_square_sf(x: float, dof: float) -> float:
    """Survival function of the chi-square distribution with `dof` dof."""
    return regularized_gamma_upper(dof / 2.0, x / 2.0)


def integrate_adaptive(
    f: Callable[[float], float],
    a: float,
    b: float,
    tol: float = 1e-10,
    limit: int = 200,
) -> float:
    """Integral of f over [a, b] with absolute error <= tol.

    Adaptive Gauss-Kronrod; raises MaxDepthExceededError when the
    subdivision budget cannot certify the tolerance.
    """
    if tol <= 0.0:
        raise DomainError("tol must be positive")
    if not (a < b):
        raise DomainError(f"integration requires a < b, got [{a}, {b}]")
    value, abserr = integrate.quad(f, a, b, epsabs=tol, epsrel=0.0, limit=limit)
    if not math.isfinite(value) or abserr > max(tol, abs(value) * 1e-12):
        raise MaxDepthExceededError(
            f"quadrature error estimate {abserr:.3e} exceeds tol {tol:.3e}"
        )
    return value


def find_root_bracketed(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    tol: float = 1e-12,
) -> float:
    """Root of f inside [lo, hi]; the final bracket width is <= tol.

    Requires f(lo) and f(hi) to have opposite signs (or be zero).
    """
    if tol <= 0.0:
        raise DomainError("tol must be positive")
    flo, fhi = f(lo), f(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if (flo > 0.0) == (fhi > 0.0):
        raise NoSignChangeError(
            f"f({lo}) = {flo} and f({hi}) = {fhi} have the same sign"
        )
    return float(optimize.brentq(f, lo, hi, xtol=tol))


def _initial_simplex(x0: np.ndarray, scale: float) -> np.ndarray:
    n = x0.shape[0]
    simplex = np.tile(x0, (n + 1, 1))
    for i in range(n):
        step = scale * abs(x0[i]) if x0[i] != 0.0 else scale
        simplex[i + 1, i] += step
    return simplex


def minimize_simplex(
    objective: Callable[[np.ndarray], float],
    x0: Sequence[float],
    opts: OptimizerOptions = OptimizerOptions(),
) -> SimplexResult:
    """Nelder-Mead descent from x0.

    The returned value never exceeds objective(x0); `converged` is False
    when the iteration budget ran out before the simplex collapsed.
    """
    x0 = np.asarray(x0, dtype=float)
    f0 = objective(x0)
    if math.isnan(f0) or math.isinf(f0):
        raise NonFiniteObjectiveError(f"objective is {f0} at the starting point")
    result = optimize.minimize(
        objective,
        x0,
        method="Nelder-Mead",
        options={
            "maxiter": opts.max_iterations,
            "maxfev": 4 * opts.max_iterations,
            "xatol": opts.tolerance_x,
            "fatol": opts.tolerance_f,
            "initial_simplex": _initial_simplex(x0, opts.initial_simplex_scale),
        },
    )
    return SimplexResult(
        argmin=np.asarray(result.x, dtype=float),
        value=float(result.fun),
        converged=bool(result.success),
        iterations=int(result.nit),
        n_evaluations=int(result.nfev),
    )
