"""Sparse parametric VAR(infinity): simulation, penalized estimation,
order selection, and forecasting on top of the C++ core."""

from ._core import (
    coef_matrix,
    fit,
    granger,
    impulse_responses,
    one_step_forecast,
    random_model,
    select_lambda,
    select_orders,
    simulate,
    stationarity,
)

__all__ = [
    "coef_matrix",
    "fit",
    "granger",
    "impulse_responses",
    "one_step_forecast",
    "random_model",
    "select_lambda",
    "select_orders",
    "simulate",
    "stationarity",
]
