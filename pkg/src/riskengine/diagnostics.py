"""Descriptive statistics and specification tests for return series.

Moment conventions: skewness and kurtosis use population central
moments (1/N), kurtosis is raw (normal -> 3), while the reported
standard deviation uses the usual N-1 divisor.  The Jarque-Bera
statistic works off the same population moments.

The ARCH test is Engle's LM regression of squared demeaned returns on
their own lags; both the LM (N * R^2, chi-square reference) and the
F-flavored statistic are reported, since published tables are often
ambiguous about which one they show.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np
from scipy import stats as _sstats

from .errors import (
    LengthMismatchError,
    SingularRegressionError,
    TooShortError,
    ZeroVarianceError,
)
from .market_data import ReturnSeries
from .numerics import chi_square_sf

__all__ = [
    "DiagnosticsRow",
    "CorrelationMatrix",
    "moments",
    "jarque_bera",
    "ljung_box",
    "arch_lm",
    "correlation_matrix",
    "diagnostics_row",
]


@dataclass(frozen=True)
class DiagnosticsRow:
    """One asset's descriptive-statistics row with test p-values."""

    n: int
    mean: float
    std: float
    skewness: float
    kurtosis: float
    skew_p: float
    kurt_p: float
    jb_stat: float
    jb_p: float
    arch_stat: float
    arch_p: float
    arch_f_stat: float
    arch_f_p: float
    lb_stat: float
    lb_p: float
    lb2_stat: float
    lb2_p: float
    lags: int

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, payload: dict) -> "DiagnosticsRow":
        return cls(**payload)


@dataclass(frozen=True)
class CorrelationMatrix:
    """Pearson correlations of an aligned return panel."""

    asset_ids: tuple[str, ...]
    values: np.ndarray

    def to_dict(self) -> dict:
        return {
            "asset_ids": list(self.asset_ids),
            "values": [[float(v) for v in row] for row in self.values],
        }


def moments(x) -> tuple[float, float, float, float]:
    """(mean, std, skewness, kurtosis) of a 1-d sample.

    std uses the N-1 divisor; skewness m3/m2^1.5 and raw kurtosis m4/m2^2
    use population central moments.
    """
    x = np.asarray(x, dtype=float)
    if x.shape[0] < 4:
        raise TooShortError(f"need >= 4 observations, got {x.shape[0]}")
    mean = float(np.mean(x))
    centered = x - mean
    m2 = float(np.mean(centered**2))
    if m2 == 0.0:
        raise ZeroVarianceError("constant series: skewness/kurtosis undefined")
    m3 = float(np.mean(centered**3))
    m4 = float(np.mean(centered**4))
    std = float(np.std(x, ddof=1))
    return mean, std, m3 / m2**1.5, m4 / m2**2


def jarque_bera(x) -> tuple[float, float]:
    """JB = N/6 * (S^2 + (K-3)^2 / 4); p from chi-square(2)."""
    x = np.asarray(x, dtype=float)
    n = x.shape[0]
    if n < 8:
        raise TooShortError(f"need >= 8 observations, got {n}")
    _, _, skew, kurt = moments(x)
    stat = n / 6.0 * (skew**2 + 0.25 * (kurt - 3.0) ** 2)
    return stat, chi_square_sf(stat, 2)


def ljung_box(x, lags: int) -> tuple[float, float]:
    """Portmanteau Q over autocorrelations 1..lags; p from chi-square(lags).

    Pass the squared series yourself when testing squares; nothing is
    squared internally.
    """
    x = np.asarray(x, dtype=float)
    n = x.shape[0]
    if lags < 1:
        raise ValueError("lags must be >= 1")
    if n <= lags + 1:
        raise TooShortError(f"need > lags + 1 = {lags + 1} observations, got {n}")
    centered = x - np.mean(x)
    denom = float(np.sum(centered**2))
    if denom == 0.0:
        raise ZeroVarianceError("constant series: autocorrelation undefined")
    q = 0.0
    for k in range(1, lags + 1):
        rho = float(np.sum(centered[k:] * centered[:-k])) / denom
        q += rho * rho / (n - k)
    stat = n * (n + 2.0) * q
    return stat, chi_square_sf(stat, lags)


def arch_lm(x, lags: int) -> tuple[float, float, float, float]:
    """Engle's heteroskedasticity test on squared demeaned values.

    Regresses (x - mean)^2 on its own lags 1..lags with intercept and
    returns (lm_stat, lm_p, f_stat, f_p): the LM statistic is
    N_eff * R^2 against chi-square(lags), the F statistic is the usual
    regression F against F(lags, N_eff - lags - 1).
    """
    x = np.asarray(x, dtype=float)
    n = x.shape[0]
    if lags < 1:
        raise ValueError("lags must be >= 1")
    if n <= 2 * lags:
        raise TooShortError(f"need > 2 * lags = {2 * lags} observations, got {n}")
    e = (x - np.mean(x)) ** 2
    n_eff = n - lags
    y = e[lags:]
    design = np.empty((n_eff, lags + 1))
    design[:, 0] = 1.0
    for k in range(1, lags + 1):
        design[:, k] = e[lags - k : n - k]
    coef, _, rank, _ = np.linalg.lstsq(design, y, rcond=None)
    ss_tot = float(np.sum((y - np.mean(y)) ** 2))
    if rank < lags + 1 or ss_tot == 0.0:
        raise SingularRegressionError("lagged squared series are collinear or constant")
    resid = y - design @ coef
    r2 = 1.0 - float(np.sum(resid**2)) / ss_tot
    r2 = min(max(r2, 0.0), 1.0)
    lm_stat = n_eff * r2
    lm_p = chi_square_sf(lm_stat, lags)
    dof2 = n_eff - lags - 1
    if r2 >= 1.0 or dof2 < 1:
        raise SingularRegressionError("degenerate fit: F statistic undefined")
    f_stat = (r2 / lags) / ((1.0 - r2) / dof2)
    f_p = float(_sstats.f.sf(f_stat, lags, dof2))
    return lm_stat, lm_p, f_stat, f_p


def correlation_matrix(panel: list[ReturnSeries]) -> CorrelationMatrix:
    """Pairwise Pearson correlations of an aligned panel."""
    if not panel:
        raise LengthMismatchError("empty panel")
    ref = panel[0]
    if len(ref) < 3:
        raise TooShortError("need >= 3 aligned observations")
    for series in panel[1:]:
        if len(series) != len(ref) or series.dates != ref.dates:
            raise LengthMismatchError(
                f"{series.asset_id} is not date-aligned with {ref.asset_id}"
            )
    data = np.vstack([s.returns for s in panel])
    if np.any(np.std(data, axis=1) == 0.0):
        raise ZeroVarianceError("constant series in panel")
    values = np.corrcoef(data)
    values = np.clip((values + values.T) / 2.0, -1.0, 1.0)
    np.fill_diagonal(values, 1.0)
    return CorrelationMatrix(
        asset_ids=tuple(s.asset_id for s in panel), values=values
    )


def _two_sided_normal_p(z: float) -> float:
    return float(math.erfc(abs(z) / math.sqrt(2.0)))


def diagnostics_row(x, lags: int = 12, demean_squares: bool = True) -> DiagnosticsRow:
    """Assemble the full descriptive row for one series.

    ``demean_squares`` controls the input of the squared-series Ljung-Box
    test: demeaned squares for raw returns, plain squares for
    standardized residuals (which are mean-zero by construction).
    """
    x = np.asarray(x, dtype=float)
    n = x.shape[0]
    mean, std, skew, kurt = moments(x)
    jb_stat, jb_p = jarque_bera(x)
    lm_stat, lm_p, f_stat, f_p = arch_lm(x, lags)
    lb_stat, lb_p = ljung_box(x, lags)
    squares = (x - mean) ** 2 if demean_squares else x**2
    lb2_stat, lb2_p = ljung_box(squares, lags)
    return DiagnosticsRow(
        n=n,
        mean=mean,
        std=std,
        skewness=skew,
        kurtosis=kurt,
        skew_p=_two_sided_normal_p(skew / math.sqrt(6.0 / n)),
        kurt_p=_two_sided_normal_p((kurt - 3.0) / math.sqrt(24.0 / n)),
        jb_stat=jb_stat,
        jb_p=jb_p,
        arch_stat=lm_stat,
        arch_p=lm_p,
        arch_f_stat=f_stat,
        arch_f_p=f_p,
        lb_stat=lb_stat,
        lb_p=lb_p,
        lb2_stat=lb2_stat,
        lb2_p=lb2_p,
        lags=lags,
    )
