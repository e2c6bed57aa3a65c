"""Linearized operators around kinks: spectra, linear transform residuals,
and second-order wave checks.

The three Schrodinger operators in play are

* ``kink_sg_operator``      -d^2/dx^2 + 1 - 2 sech^2(x)           (threshold 1)
* ``kink_phi4_operator``    -d^2/dx^2 + 2 - 3 sech^2(x/sqrt 2)    (threshold 2)
* ``kink_phi4_dual_operator``  -d^2/dx^2 + 2 - sech^2(x/sqrt 2)   (threshold 2)

The first has a single eigenvalue 0 (no internal mode, odd threshold resonance
tanh x); the second has eigenvalues {0, 3/2} and an even threshold resonance
1 - (3/2) sech^2(x/sqrt 2); the third has the single eigenvalue 3/2 and no
kernel.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Union

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .grids import (
    ContractError,
    GridSpec,
    ParameterError,
    SolverError,
    derivative,
    dirichlet_second_derivative,
    quadrature,
)
from .solutions import SolutionSampler

__all__ = [
    "SchrodingerOperator",
    "kink_sg_operator",
    "kink_phi4_operator",
    "kink_phi4_dual_operator",
    "apply_operator",
    "discrete_spectrum",
    "lbt_residual_sg",
    "lbt_residual_phi4",
    "lbt_residual_phi4_dual",
    "wave_residual",
]

_SQRT2 = math.sqrt(2.0)


def _sech(x):
    with np.errstate(over="ignore"):
        return 1.0 / np.cosh(x)


@dataclass(frozen=True)
class SchrodingerOperator:
    """One-dimensional operator -d^2/dx^2 + potential(x)."""

    potential: Callable
    continuum_threshold: float
    label: str = ""

    def check_threshold(self, grid: GridSpec, tol: float = 1e-6):
        """The potential must have reached its asymptotic value at the grid ends."""
        for end in (grid.x_min, grid.x_max):
            v = float(self.potential(np.array([end]))[0])
            if abs(v - self.continuum_threshold) > tol:
                raise ContractError(
                    f"potential({end:g}) = {v:.8g} is not within {tol:g} of the "
                    f"continuum threshold {self.continuum_threshold:g}"
                )


def kink_sg_operator() -> SchrodingerOperator:
    return SchrodingerOperator(lambda x: 1.0 - 2.0 * _sech(x) ** 2, 1.0, "sg-kink")


def kink_phi4_operator() -> SchrodingerOperator:
    return SchrodingerOperator(lambda x: 2.0 - 3.0 * _sech(np.asarray(x) / _SQRT2) ** 2, 2.0, "phi4-kink")


def kink_phi4_dual_operator() -> SchrodingerOperator:
    return SchrodingerOperator(lambda x: 2.0 - _sech(np.asarray(x) / _SQRT2) ** 2, 2.0, "phi4-kink-dual")


def apply_operator(op: SchrodingerOperator, f, grid: GridSpec) -> np.ndarray:
    """-f'' + potential * f with centered differences and Dirichlet closure."""
    f = np.asarray(f, dtype=float)
    return -dirichlet_second_derivative(f, grid) + op.potential(grid.x) * f


def discrete_spectrum(op: SchrodingerOperator, grid: GridSpec, margin: float = 0.05):
    """Eigenvalues below threshold - margin of the tridiagonal discretization.

    Returns a list of (eigenvalue, eigenvector) sorted ascending, eigenvectors
    normalized to unit L^2 norm in the grid quadrature with a positive
    max-magnitude entry.  The margin excludes the spurious near-threshold modes
    that Dirichlet truncation creates out of the continuum.
    """
    grid.require_symmetric()
    if grid.n_points < 2001:
        raise ContractError(f"spectrum needs n_points >= 2001, got {grid.n_points}")
    op.check_threshold(grid)
    h = grid.h
    diag = 2.0 / h ** 2 + np.asarray(op.potential(grid.x), dtype=float)
    off = np.full(grid.n_points - 1, -1.0 / h ** 2)
    lo = float(diag.min() - 2.0 / h ** 2) - 1.0
    hi = op.continuum_threshold - margin
    try:
        vals, vecs = eigh_tridiagonal(diag, off, select="v", select_range=(lo, hi))
    except Exception as exc:  # pragma: no cover - LAPACK failure is exotic
        raise SolverError(f"tridiagonal eigensolve failed: {exc}") from exc
    out = []
    for k in range(len(vals)):
        v = vecs[:, k]
        v = v / math.sqrt(quadrature(v * v, grid))
        if v[np.argmax(np.abs(v))] < 0:
            v = -v
        out.append((float(vals[k]), v))
    return out


def _space_derivative(sampler: SolutionSampler, t: float, grid: GridSpec) -> np.ndarray:
    if sampler.dvalue_dx is not None:
        return np.asarray(sampler.dvalue_dx(t, grid.x), dtype=float)
    return derivative(np.asarray(sampler.value(t, grid.x), dtype=float), grid)


def _first_order_residuals(phi: SolutionSampler, psi: SolutionSampler, t: float,
                           grid: GridSpec, coeff: np.ndarray):
    """Residuals of  phi_x - psi_t + c phi  and  phi_t - psi_x + c psi."""
    x = grid.x
    e1 = (_space_derivative(phi, t, grid)
          - np.asarray(psi.dvalue_dt(t, x), dtype=float)
          + coeff * np.asarray(phi.value(t, x), dtype=float))
    e2 = (np.asarray(phi.dvalue_dt(t, x), dtype=float)
          - _space_derivative(psi, t, grid)
          + coeff * np.asarray(psi.value(t, x), dtype=float))
    return e1, e2


def lbt_residual_sg(phi: SolutionSampler, psi: SolutionSampler, t: float, grid: GridSpec):
    """Residuals of the linearized transform around the static sine-Gordon kink.

    The system couples a mode phi around the kink to a mode psi of the flat
    Klein-Gordon equation through the coefficient tanh x.
    """
    return _first_order_residuals(phi, psi, t, grid, np.tanh(grid.x))


def lbt_residual_phi4(phi: SolutionSampler, psi: SolutionSampler, t: float, grid: GridSpec):
    """Residuals of the linearized transform around the phi^4 kink (coefficient sqrt 2 H)."""
    return _first_order_residuals(phi, psi, t, grid, _SQRT2 * np.tanh(grid.x / _SQRT2))


def lbt_residual_phi4_dual(phi_pair, psi_pair, sign: int, t: float, grid: GridSpec):
    """Residuals of the dual complex transform around the phi^4 kink.

    ``phi_pair`` and ``psi_pair`` are (real, imaginary) sampler tuples; ``sign``
    is +1 or -1 and selects which of the two conjugate systems is meant.  The
    equations read, with lam = i sqrt(3/2) and H = tanh(x/sqrt 2):

        phi_x - psi_t + (1/sqrt 2) H phi + sign * lam * psi = 0
        phi_t - psi_x + (1/sqrt 2) H psi + sign * lam * phi = 0

    Returns ((e1_re, e1_im), (e2_re, e2_im)).
    """
    if sign not in (1, -1):
        raise ParameterError(f"sign must be +1 or -1, got {sign}")
    lam_im = math.sqrt(1.5)  # lam = i * lam_im
    x = grid.x
    H = np.tanh(x / _SQRT2)
    phi_re, phi_im = phi_pair
    psi_re, psi_im = psi_pair

    def val(s):
        return np.asarray(s.value(t, x), dtype=float)

    def vdt(s):
        return np.asarray(s.dvalue_dt(t, x), dtype=float)

    # lam * (a + i b) = i lam_im (a + i b) = -lam_im b + i lam_im a
    e1_re = (_space_derivative(phi_re, t, grid) - vdt(psi_re)
             + H / _SQRT2 * val(phi_re) + sign * (-lam_im * val(psi_im)))
    e1_im = (_space_derivative(phi_im, t, grid) - vdt(psi_im)
             + H / _SQRT2 * val(phi_im) + sign * (lam_im * val(psi_re)))
    e2_re = (vdt(phi_re) - _space_derivative(psi_re, t, grid)
             + H / _SQRT2 * val(psi_re) + sign * (-lam_im * val(phi_im)))
    e2_im = (vdt(phi_im) - _space_derivative(psi_im, t, grid)
             + H / _SQRT2 * val(psi_im) + sign * (lam_im * val(phi_re)))
    return (e1_re, e1_im), (e2_re, e2_im)


def wave_residual(phi: SolutionSampler, op: Union[SchrodingerOperator, float],
                  t: float, grid: GridSpec, dt: float) -> np.ndarray:
    """Residual of phi_tt + L phi = 0 with centered time differences.

    ``op`` is a SchrodingerOperator, or a number m^2 meaning the flat operator
    -d^2/dx^2 + m^2.
    """
    if not dt > 0:
        raise ParameterError("dt must be positive")
    x = grid.x
    u_m = np.asarray(phi.value(t - dt, x), dtype=float)
    u_0 = np.asarray(phi.value(t, x), dtype=float)
    u_p = np.asarray(phi.value(t + dt, x), dtype=float)
    u_tt = (u_p - 2.0 * u_0 + u_m) / dt ** 2
    if isinstance(op, SchrodingerOperator):
        return u_tt + apply_operator(op, u_0, grid)
    mass_sq = float(op)
    return u_tt - dirichlet_second_derivative(u_0, grid) + mass_sq * u_0
