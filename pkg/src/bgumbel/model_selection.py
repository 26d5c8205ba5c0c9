"""Block-maxima goodness-of-fit pipeline.

Reduce a series to per-block maxima, screen them for serial dependence
(Ljung-Box), optionally center them, fit the BG and Gumbel models, and
compare the fits by Kolmogorov-Smirnov statistic, AIC and BIC.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Sequence

import numpy as np
from scipy import special as sc
from scipy.stats import chi2

from .distribution import bg_cdf, gumbel_cdf
from .errors import InsufficientDataError
from .inference import FitResult, fit_gumbel_mle, fit_mle

__all__ = [
    "BlockMaximaConfig",
    "GofReport",
    "ModelComparison",
    "DescriptiveStats",
    "block_maxima",
    "ljung_box",
    "ks_test",
    "information_criteria",
    "descriptive_stats",
    "compare_models",
    "read_series_csv",
]


@dataclass(frozen=True)
class BlockMaximaConfig:
    """Non-overlapping block reduction settings.

    With ``allow_partial_last_block`` the tail observations that do not fill
    a whole block still contribute one (shorter) block, giving
    ceil(T / N) maxima; otherwise they are dropped, giving floor(T / N).
    """

    block_length: int
    allow_partial_last_block: bool = True

    def __post_init__(self) -> None:
        if self.block_length < 1:
            raise ValueError("block_length must be >= 1")


@dataclass(frozen=True)
class GofReport:
    """Goodness-of-fit summary for one fitted model on one dataset."""

    model_name: str
    ks_statistic: float
    ks_p_value: float
    aic: float
    bic: float
    n_obs: int

    def to_json_dict(self) -> dict:
        """Stable wire format: model, ks_stat, ks_p, aic, bic, n."""
        return {
            "model": self.model_name,
            "ks_stat": self.ks_statistic,
            "ks_p": self.ks_p_value,
            "aic": self.aic,
            "bic": self.bic,
            "n": self.n_obs,
        }


@dataclass(frozen=True)
class ModelComparison:
    """Paired BG/Gumbel reports with the preferred model name."""

    bg: GofReport | None
    gumbel: GofReport | None
    preferred: str
    bg_fit: FitResult | None = None
    gumbel_fit: FitResult | None = None
    errors: dict | None = None


@dataclass(frozen=True)
class DescriptiveStats:
    mean: float
    median: float
    maximum: float
    minimum: float
    std_dev: float


def block_maxima(series: Sequence[float], cfg: BlockMaximaConfig) -> np.ndarray:
    """Per-block maxima of non-overlapping blocks of length ``cfg.block_length``."""
    x = np.asarray(series, dtype=float).ravel()
    if x.size == 0:
        raise InsufficientDataError("empty series")
    n = cfg.block_length
    n_full = x.size // n
    maxima = [float(x[i * n : (i + 1) * n].max()) for i in range(n_full)]
    if cfg.allow_partial_last_block and x.size % n:
        maxima.append(float(x[n_full * n :].max()))
    return np.asarray(maxima)


def ljung_box(series: Sequence[float], lags: int) -> tuple[float, float]:
    """Ljung-Box portmanteau test of serial independence.

    Q = n (n + 2) sum_{k=1}^{lags} rho_k^2 / (n - k), with a chi-square(lags)
    p-value.  Returns (statistic, p_value).
    """
    x = np.asarray(series, dtype=float).ravel()
    n = x.size
    if lags < 1:
        raise ValueError("lags must be >= 1")
    if lags >= n:
        raise InsufficientDataError(f"need more than {lags} observations, got {n}")
    xc = x - x.mean()
    denom = float(np.sum(xc * xc))
    if denom == 0.0:
        raise InsufficientDataError("series is constant; autocorrelation undefined")
    q = 0.0
    for k in range(1, lags + 1):
        rho = float(np.sum(xc[:-k] * xc[k:])) / denom
        q += rho * rho / (n - k)
    q *= n * (n + 2.0)
    return q, float(chi2.sf(q, lags))


def ks_test(data, cdf: Callable[[float], float]) -> tuple[float, float]:
    """One-sample Kolmogorov-Smirnov test against an arbitrary distribution function.

    D = sup_x |F_n(x) - F(x)| evaluated from both sides of the empirical step
    function; the p-value uses the asymptotic Kolmogorov distribution of
    sqrt(n) D.
    """
    x = np.sort(np.asarray(data, dtype=float).ravel())
    n = x.size
    if n == 0:
        raise InsufficientDataError("empty data")
    f = np.asarray([float(cdf(v)) for v in x])
    i = np.arange(1, n + 1)
    d_plus = float(np.max(i / n - f))
    d_minus = float(np.max(f - (i - 1) / n))
    d = max(d_plus, d_minus)
    return d, float(sc.kolmogorov(math.sqrt(n) * d))


def information_criteria(loglik: float, k: int, n: int) -> tuple[float, float]:
    """AIC = 2k - 2l and BIC = k ln(n) - 2l."""
    if n < 1 or k < 1:
        raise ValueError("n and k must be >= 1")
    return 2.0 * k - 2.0 * loglik, k * math.log(n) - 2.0 * loglik


def descriptive_stats(data) -> DescriptiveStats:
    x = np.asarray(data, dtype=float).ravel()
    if x.size == 0:
        raise InsufficientDataError("empty data")
    sd = float(x.std(ddof=1)) if x.size > 1 else 0.0
    return DescriptiveStats(
        mean=float(x.mean()),
        median=float(np.median(x)),
        maximum=float(x.max()),
        minimum=float(x.min()),
        std_dev=sd,
    )


def _gof_for_fit(fit: FitResult, data: np.ndarray, model_name: str, k: int) -> GofReport:
    if model_name == "gumbel":
        cdf = lambda v: gumbel_cdf(fit.params.gumbel, v)
    else:
        cdf = lambda v: bg_cdf(fit.params, v)
    stat, p = ks_test(data, cdf)
    aic, bic = information_criteria(fit.log_likelihood, k, data.size)
    return GofReport(
        model_name=model_name,
        ks_statistic=stat,
        ks_p_value=p,
        aic=aic,
        bic=bic,
        n_obs=int(data.size),
    )


def compare_models(data) -> ModelComparison:
    """Fit BG and Gumbel to the same data and rank them.

    Preference goes to the lowest AIC, ties broken by lowest BIC and then by
    fewer parameters.  A failure in one model is recorded without aborting
    the other; both failing raises.
    """
    x = np.asarray(data, dtype=float).ravel()
    if x.size < 5:
        raise InsufficientDataError(f"need at least 5 observations, got {x.size}")

    results: dict[str, GofReport] = {}
    fits: dict[str, FitResult] = {}
    errors: dict[str, str] = {}
    for name, fitter, k in (("bg", fit_mle, 3), ("gumbel", fit_gumbel_mle, 2)):
        try:
            fit = fitter(x)
            fits[name] = fit
            results[name] = _gof_for_fit(fit, x, name, k)
        except Exception as exc:  # noqa: BLE001 - per-model isolation is the contract
            errors[name] = f"{type(exc).__name__}: {exc}"
    if not results:
        raise RuntimeError(f"both model fits failed: {errors}")

    n_params = {"bg": 3, "gumbel": 2}
    preferred = min(
        results,
        key=lambda name: (results[name].aic, results[name].bic, n_params[name]),
    )
    return ModelComparison(
        bg=results.get("bg"),
        gumbel=results.get("gumbel"),
        preferred=preferred,
        bg_fit=fits.get("bg"),
        gumbel_fit=fits.get("gumbel"),
        errors=errors or None,
    )


def read_series_csv(path: str | Path) -> np.ndarray:
    """Read a single-column numeric CSV; a non-numeric first line is a header."""
    values: list[float] = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh):
            token = raw.strip().split(",")[0].strip()
            if not token:
                continue
            try:
                values.append(float(token))
            except ValueError:
                if lineno == 0:
                    continue  # header
                raise ValueError(f"{path}: non-numeric value {token!r} on line {lineno + 1}")
    if not values:
        raise InsufficientDataError(f"{path}: no numeric data found")
    return np.asarray(values)
