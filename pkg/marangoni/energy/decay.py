"""Least-squares fits of exponential and algebraic decay laws."""
from __future__ import annotations

import math
from typing import TYPE_CHECKING, Final

import msgspec
import numpy as np

from marangoni.exceptions import DecayFitError

if TYPE_CHECKING:
    from marangoni.grid.grid import Grid
    from marangoni.marangoni_types import DecayModel, FloatArray

MIN_SAMPLES: Final = 10
FLAT_RTOL: Final = 1e-12


class DecayFit(msgspec.Struct, frozen=True):
    """Fitted decay law.

    - `model`: `exponential` for `y ~ C exp(-rate t)`,
        `algebraic` for `y ~ C (1 + t)^(-exponent)`.
    - `rate_or_exponent`: fitted decay constant.
    - `r_squared`: coefficient of determination in log space.
    - `window`: `[t_start, t_end]` of the fitted samples.
    """

    model: str
    rate_or_exponent: float
    r_squared: float
    window: tuple[float, float]
    prefactor: float = 1.0


def _is_flat(log_y: FloatArray) -> bool:
    # log of a constant trace varies by rounding only
    scale: Final = max(1.0, float(np.max(np.abs(log_y))))
    return float(np.ptp(log_y)) <= FLAT_RTOL * scale


def fit_decay(
    times: FloatArray,
    values: FloatArray,
    model: DecayModel,
    burn_fraction: float = 0.0,
) -> DecayFit:
    """Fit a decay law to a positive time series.

    Samples with `t` in the first `burn_fraction` of the run are
    dropped, the rates being asymptotic.

    ### Parameters:
    - `times`: sample times, increasing.
    - `values`: samples, strictly positive inside the window.
    - `model`: `exponential` or `algebraic`.
    - `burn_fraction`: share of the run excluded from the fit.

    ### Returns:
    `DecayFit` with the fitted constant and `r^2`.

    ### Raises:
    - `DecayFitError`: too few samples or non-positive samples.
    """
    times_arr: Final = np.asarray(times, dtype=np.float64)
    values_arr: Final = np.asarray(values, dtype=np.float64)
    if times_arr.shape != values_arr.shape:
        shape_err_msg: Final = "times and values differ in length"
        raise DecayFitError(shape_err_msg)
    if times_arr.size == 0:
        empty_err_msg: Final = "empty trace"
        raise DecayFitError(empty_err_msg)

    t_start: Final = times_arr[0] + burn_fraction * (
        times_arr[-1] - times_arr[0]
    )
    in_window: Final = times_arr >= t_start
    window_t: Final = times_arr[in_window]
    window_y: Final = values_arr[in_window]

    if window_t.size < MIN_SAMPLES:
        few_err_msg: Final = (
            f"need at least {MIN_SAMPLES} samples, got {window_t.size}"
        )
        raise DecayFitError(few_err_msg)
    if not np.all(window_y > 0):
        sign_err_msg: Final = "trace has non-positive samples in the window"
        raise DecayFitError(sign_err_msg)

    abscissa: Final = (
        window_t if model == "exponential" else np.log1p(window_t)
    )
    log_y: Final = np.log(window_y)
    if _is_flat(log_y):
        return DecayFit(
            model=model,
            rate_or_exponent=0.0,
            r_squared=1.0,
            window=(float(window_t[0]), float(window_t[-1])),
            prefactor=float(np.exp(log_y.mean())),
        )
    slope, intercept = np.polyfit(abscissa, log_y, deg=1)

    predicted: Final = slope * abscissa + intercept
    ss_res: Final = float(np.sum((log_y - predicted) ** 2))
    ss_tot: Final = float(np.sum((log_y - log_y.mean()) ** 2))
    r_squared: Final = 1.0 - ss_res / ss_tot

    return DecayFit(
        model=model,
        rate_or_exponent=float(-slope),
        r_squared=float(min(max(r_squared, 0.0), 1.0)),
        window=(float(window_t[0]), float(window_t[-1])),
        prefactor=float(np.exp(intercept)),
    )


def heat_mode_rates(
    grid: Grid,
    k: float,
    dt: float,
) -> tuple[float, float]:
    """Predicted decay rates of the lowest temperature mode.

    ### Returns:
    `(discrete, continuum)`. The discrete rate is
    `log(1 + k dt mu) / dt` with `mu` the Dirichlet eigenvalue
    of the five-point stencil, the rate implicit steps realize.
    The continuum rate is `k pi^2 (1/lx^2 + 1/ly^2)`.
    """
    mu: Final = 4.0 / grid.dx**2 * math.sin(
        math.pi * grid.dx / (2.0 * grid.lx),
    ) ** 2 + 4.0 / grid.dy**2 * math.sin(
        math.pi * grid.dy / (2.0 * grid.ly),
    ) ** 2
    continuum: Final = k * math.pi**2 * (1.0 / grid.lx**2 + 1.0 / grid.ly**2)
    return math.log1p(k * dt * mu) / dt, continuum
