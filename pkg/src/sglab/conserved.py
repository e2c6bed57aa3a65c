"""Energy and momentum functionals, and their closed forms on kink data."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

from .grids import (
    ContractError,
    FieldState,
    Model,
    ParameterError,
    derivative,
    quadrature,
)

__all__ = [
    "TopologicalState",
    "energy",
    "momentum",
    "manifold_momentum",
    "kink_profile_momentum",
]


@dataclass
class TopologicalState:
    """A field state together with its declared asymptotic values.

    The boundary node values must sit within 1e-6 of the declared limits, so the
    truncated-domain energy and momentum integrals are meaningful.
    """

    state: FieldState
    left_limit: float
    right_limit: float

    def __post_init__(self):
        for value, limit, side in ((self.state.u[0], self.left_limit, "left"),
                                   (self.state.u[-1], self.right_limit, "right")):
            if abs(value - limit) > 1e-6:
                raise ContractError(
                    f"{side} boundary value {value:.8g} is not within 1e-6 "
                    f"of the declared limit {limit:.8g}"
                )


def energy(state: FieldState, model: Model) -> float:
    """Total energy (1/2) int (u_x^2 + v^2) + int V(u) by trapezoid quadrature.

    Warns when the energy density has not decayed at the grid ends, reporting
    the end density as a rough truncation-error estimate.
    """
    ux = derivative(state.u, state.grid)
    density = 0.5 * (ux ** 2 + state.v ** 2) + model.potential(state.u)
    end_density = max(abs(density[0]), abs(density[-1]))
    if end_density > 1e-10:
        warnings.warn(
            f"energy density {end_density:.3e} at the grid ends; truncation error "
            f"is roughly that size",
            stacklevel=2,
        )
    return quadrature(density, state.grid)


def momentum(state: FieldState) -> float:
    """Momentum (1/2) int u_t u_x dx by trapezoid quadrature."""
    ux = derivative(state.u, state.grid)
    return 0.5 * quadrature(state.v * ux, state.grid)


def manifold_momentum(delta: float) -> float:
    """Momentum of kink data built from the vacuum with multiplier 1 + delta.

    Closed form 2 (1/(1+delta) - (1+delta)); zero exactly at delta = 0 and of
    sign opposite to delta.
    """
    a = 1.0 + delta
    if not a > 0:
        raise ParameterError(f"need 1 + delta > 0, got delta = {delta}")
    return 2.0 * (1.0 / a - a)


def kink_profile_momentum(beta: float) -> float:
    """Momentum -4 beta / sqrt(1 - beta^2) of the moving kink profile."""
    if not abs(beta) < 1:
        raise ParameterError(f"|beta| < 1 required, got {beta}")
    return -4.0 * beta / math.sqrt(1.0 - beta ** 2)
