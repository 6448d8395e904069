"""Constraint-safe OHLC forecasting with VAR/VEC models.

Bars are passed as sequences of (open, high, low, close) tuples. Functions
that produce structured results return plain dictionaries.
"""

import json as _json

from . import _candlecast as _ext
from ._candlecast import (
    DataError,
    IoError,
    NumericError,
    forecast_var,
    forecast_vec,
    inverse_transform,
    is_valid,
    select_lag_aic,
    simulate,
    transform,
)

__all__ = [
    "DataError",
    "IoError",
    "NumericError",
    "adf_test",
    "backtest",
    "evaluate",
    "fit_var",
    "forecast",
    "forecast_var",
    "forecast_vec",
    "inverse_transform",
    "is_valid",
    "johansen_trace_test",
    "sanitize",
    "select_lag_aic",
    "simulate",
    "transform",
]


def sanitize(bars, seed=0):
    """Return (clean_bars, summary) after suspension removal and boundary nudging."""
    clean, summary = _ext.sanitize(list(bars), seed)
    return clean, _json.loads(summary)


def adf_test(series, significance=0.05):
    return _json.loads(_ext.adf_test(list(series), significance))


def johansen_trace_test(levels, lag, significance=0.05):
    return _json.loads(_ext.johansen_trace_test(levels, lag, significance))


def fit_var(y, p):
    return _json.loads(_ext.fit_var(y, p))


def backtest(bars, q, m=1, **options):
    """Rolling-window backtest; see the CLI `backtest` command for the schema."""
    return _json.loads(_ext.backtest(list(bars), q, m, **options))


def forecast(bars, q, m=1, **options):
    """Forecast the next m bars from the trailing q bars."""
    return _json.loads(_ext.forecast(list(bars), q, m, **options))


def evaluate(actual, forecast_bars):
    return _json.loads(_ext.evaluate(list(actual), list(forecast_bars)))
