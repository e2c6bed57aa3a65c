"""Backlund residual functionals and the lifting/descent solvers.

The first-order transform links two solutions phi (vacuum side) and psi (kink
side) through a parameter a.  Solving the transform for one side given the
other is done with damped Newton iterations whose linear steps are the exact
integrating-factor solves of the equations linearized at the current iterate:

* growing integrating factors are integrated outward from the center, so every
  kernel ratio stays <= 1;
* decaying integrating factors are integrated inward from the boundaries,
  after checking the compatibility integral that parity must annihilate.

Background profiles (kink, breather, wobbler) always enter residuals through
their analytic derivatives; only the unknown perturbations are differentiated
discretely.  This keeps fixed points of the solvers exact at the discrete
level, so forward and backward maps invert each other to solver tolerance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .grids import (
    ContractError,
    FieldState,
    GridSpec,
    ParameterError,
    PerturbationPair,
    SolverError,
    cumulative_quadrature,
    derivative,
    pair_norm,
    parity_check,
    quadrature,
)
from .solutions import (
    KinkParams,
    KinkProfile,
    SolutionSampler,
    WobblerParams,
    breather,
    breather_half_angle,
    kink_profile,
    wobbler,
    wobbler_half_angle,
)

__all__ = [
    "BtParameter",
    "LiftReport",
    "bt_residual",
    "bt_pair_residual",
    "tilde_residual",
    "wobbler_pair_residual",
    "construct_manifold_data",
    "lift_zero_to_kink",
    "descend_kink_to_zero",
    "lift_breather_to_wobbler",
    "descend_wobbler_to_breather",
    "lift_with_orthogonality",
    "zero_momentum_manifold_data",
    "final_speed_from_momentum",
    "final_speed_from_delta",
]

_MAX_LOG_SPAN = 600.0  # integrating factors stay inside double range below this


@dataclass(frozen=True)
class BtParameter:
    """Backlund parameter a, with the speed and offset views attached.

    beta = (a^2 - 1)/(a^2 + 1) and a(beta) = sqrt((1 + beta)/(1 - beta)) invert
    each other; delta = a - 1 is the offset from the static-kink value.
    """

    a: float

    def __post_init__(self):
        if self.a == 0:
            raise ParameterError("Backlund parameter a must be nonzero")

    @classmethod
    def from_beta(cls, beta: float) -> "BtParameter":
        if not abs(beta) < 1:
            raise ParameterError(f"|beta| < 1 required, got {beta}")
        return cls(math.sqrt((1.0 + beta) / (1.0 - beta)))

    @classmethod
    def from_delta(cls, delta: float) -> "BtParameter":
        return cls(1.0 + delta)

    @property
    def beta(self) -> float:
        return (self.a ** 2 - 1.0) / (self.a ** 2 + 1.0)

    @property
    def delta(self) -> float:
        return self.a - 1.0


@dataclass
class LiftReport:
    """Outcome of a lifting/descent solve."""

    result: PerturbationPair
    iterations: int
    final_residual: float
    nu0: float
    residual_history: list = field(default_factory=list)
    ortho_residual: Optional[float] = None


def _a_value(a) -> float:
    return a.a if isinstance(a, BtParameter) else float(a)


def bt_residual(phi: FieldState, psi: FieldState, a) -> tuple:
    """Transform residuals (F1, F2) for sampled states, derivatives by finite
    differences.

    phi is the vacuum-side state, psi the kink-side state:

        F1 = psi_u_x - phi_v - (1/a) sin((psi_u + phi_u)/2) - a sin((psi_u - phi_u)/2)
        F2 = psi_v - phi_u_x - (1/a) sin((psi_u + phi_u)/2) + a sin((psi_u - phi_u)/2)
    """
    av = _a_value(a)
    if av == 0:
        raise ParameterError("Backlund parameter a must be nonzero")
    if phi.grid != psi.grid:
        raise ContractError("bt_residual needs matching grids")
    s_plus = np.sin(0.5 * (psi.u + phi.u))
    s_minus = np.sin(0.5 * (psi.u - phi.u))
    f1 = derivative(psi.u, psi.grid) - phi.v - s_plus / av - av * s_minus
    f2 = psi.v - derivative(phi.u, phi.grid) - s_plus / av + av * s_minus
    return f1, f2


def bt_pair_residual(phi: SolutionSampler, psi: SolutionSampler, a, t: float,
                     grid: GridSpec) -> tuple:
    """Transform residuals for two samplers, using analytic derivatives.

    This is the exact-identity evaluation: for a genuine transform pair the
    residuals are at round-off level independent of the grid spacing.
    """
    av = _a_value(a)
    if av == 0:
        raise ParameterError("Backlund parameter a must be nonzero")
    x = grid.x

    def dx_of(s):
        if s.dvalue_dx is not None:
            return np.asarray(s.dvalue_dx(t, x), dtype=float)
        return derivative(np.asarray(s.value(t, x), dtype=float), grid)

    phi_u = np.asarray(phi.value(t, x), dtype=float)
    psi_u = np.asarray(psi.value(t, x), dtype=float)
    s_plus = np.sin(0.5 * (psi_u + phi_u))
    s_minus = np.sin(0.5 * (psi_u - phi_u))
    f1 = dx_of(psi) - np.asarray(phi.dvalue_dt(t, x), dtype=float) - s_plus / av - av * s_minus
    f2 = np.asarray(psi.dvalue_dt(t, x), dtype=float) - dx_of(phi) - s_plus / av + av * s_minus
    return f1, f2


# --- kink-centered functionals ----------------------------------------------

def _kink_f1(prof: KinkProfile, grid: GridSpec, u, du, y, v, mult):
    """First kink-centered residual; background derivatives analytic, du discrete."""
    x = grid.x
    arg = prof.q_tilde(x) + u
    return (prof.q_x(x) + du - v
            - np.cos(0.5 * (arg + y)) / mult - mult * np.cos(0.5 * (arg - y)))


def _kink_f2(prof: KinkProfile, grid: GridSpec, u, s, y, dy, mult):
    """Second kink-centered residual; dy is the discrete derivative of y."""
    x = grid.x
    arg = prof.q_tilde(x) + u
    return (prof.q_t(x) + s - dy
            - np.cos(0.5 * (arg + y)) / mult + mult * np.cos(0.5 * (arg - y)))


def tilde_residual(utilde_stilde: PerturbationPair, y_v: PerturbationPair,
                   delta: float, kinkp: KinkParams) -> tuple:
    """Kink-centered transform residuals (F1, F2) for given perturbation pairs.

    The multiplier is a(kinkp.beta) + delta and must be nonzero.
    """
    if utilde_stilde.grid != y_v.grid:
        raise ContractError("tilde_residual needs matching grids")
    mult = BtParameter.from_beta(kinkp.beta).a + delta
    if mult == 0:
        raise ParameterError(f"a(beta) + delta must be nonzero, got {mult}")
    grid = utilde_stilde.grid
    prof = kink_profile(kinkp)
    u, s = utilde_stilde.first, utilde_stilde.second
    y, v = y_v.first, y_v.second
    f1 = _kink_f1(prof, grid, u, derivative(u, grid), y, v, mult)
    f2 = _kink_f2(prof, grid, u, s, y, derivative(y, grid), mult)
    return f1, f2


def _wobbler_background(beta: float, t: float, grid: GridSpec):
    """Analytic wobbler/breather background data used by the wobbler maps."""
    x = grid.x
    w = wobbler(WobblerParams(beta))
    b = breather(beta)
    data = {
        "w_tilde": np.asarray(w.value(t, x), dtype=float) - np.pi,
        "w_x": np.asarray(w.dvalue_dx(t, x), dtype=float),
        "w_t": np.asarray(w.dvalue_dt(t, x), dtype=float),
        "b": np.asarray(b.value(t, x), dtype=float),
        "b_x": np.asarray(b.dvalue_dx(t, x), dtype=float),
        "b_t": np.asarray(b.dvalue_dt(t, x), dtype=float),
    }
    sin_w, _ = wobbler_half_angle(beta, t, x)
    _, cos_b = breather_half_angle(beta, t, x)
    data["coeff"] = sin_w * cos_b
    return data


def _wobbler_f1(bg, u, du, y, v):
    arg_p = 0.5 * (bg["w_tilde"] + u + bg["b"] + y)
    arg_m = 0.5 * (bg["w_tilde"] + u - bg["b"] - y)
    return bg["w_x"] + du - bg["b_t"] - v - np.cos(arg_p) - np.cos(arg_m)


def _wobbler_f2(bg, u, s, y, dy):
    arg_p = 0.5 * (bg["w_tilde"] + u + bg["b"] + y)
    arg_m = 0.5 * (bg["w_tilde"] + u - bg["b"] - y)
    return bg["w_t"] + s - bg["b_x"] - dy - np.cos(arg_p) + np.cos(arg_m)


def wobbler_pair_residual(u_s: PerturbationPair, y_v: PerturbationPair,
                          beta: float, t: float) -> tuple:
    """Residuals of the transform linking breather-side (y, v) to
    wobbler-side (u, s) perturbations at time t."""
    if u_s.grid != y_v.grid:
        raise ContractError("wobbler_pair_residual needs matching grids")
    grid = u_s.grid
    bg = _wobbler_background(beta, t, grid)
    f1 = _wobbler_f1(bg, u_s.first, derivative(u_s.first, grid), y_v.first, y_v.second)
    f2 = _wobbler_f2(bg, u_s.first, u_s.second, y_v.first, derivative(y_v.first, grid))
    return f1, f2


# --- integrating-factor linear solves ----------------------------------------

def _check_span(lw):
    span = float(np.max(lw) - np.min(lw))
    if span > _MAX_LOG_SPAN:
        raise SolverError(
            f"integrating factor spans e^{span:.0f}; domain too wide for this solve"
        )


def _solve_outward(lw, f, h, m):
    """Solve w' + c w = f with c = lw', w(x_m) = 0, integrating outward from m.

    w(x) = e^{-lw(x)} int_{x_m}^x e^{lw} f; computed per half with the maximum
    log subtracted so every factor stays bounded.
    """
    _check_span(lw)
    w = np.empty_like(f)
    # right half (center .. right boundary)
    lwr, fr = lw[m:], f[m:]
    mr = lwr.max()
    g = fr * np.exp(lwr - mr)
    k = np.concatenate(([0.0], np.cumsum(0.5 * h * (g[1:] + g[:-1]))))
    w[m:] = np.exp(-(lwr - mr)) * k
    # left half, reversed so index 0 is the center
    lwl, fl = lw[:m + 1][::-1], f[:m + 1][::-1]
    ml = lwl.max()
    g = fl * np.exp(lwl - ml)
    k = np.concatenate(([0.0], np.cumsum(0.5 * h * (g[1:] + g[:-1]))))
    w[:m + 1] = (-np.exp(-(lwl - ml)) * k)[::-1]
    return w


def _solve_inward(lw, f, h, m, compat_tol=1e-10):
    """Solve w' - c w = f with c = lw', where e^{-lw} decays at both ends.

    w(x) = e^{lw(x)} int_{-inf}^x e^{-lw} f, integrated inward from each
    boundary; requires the compatibility integral int e^{-lw} f = 0, which is
    checked (in the max-normalized weight) before integrating.
    """
    _check_span(lw)
    base = lw.min()
    weight = np.exp(-(lw - base))
    total = h * ((weight * f).sum() - 0.5 * (weight[0] * f[0] + weight[-1] * f[-1]))
    if abs(total) > compat_tol:
        raise ContractError(
            f"compatibility integral {total:.3e} exceeds {compat_tol:.1e}; "
            f"inputs have lost the required parity"
        )
    w = np.empty_like(f)
    # left half: accumulate from the left boundary
    lwl, fl = lw[:m + 1], f[:m + 1]
    g = fl * np.exp(-(lwl - base))
    k = np.concatenate(([0.0], np.cumsum(0.5 * h * (g[1:] + g[:-1]))))
    w[:m + 1] = np.exp(lwl - base) * k
    # right half: accumulate from the right boundary, reversed
    lwr, fr = lw[m:][::-1], f[m:][::-1]
    g = fr * np.exp(-(lwr - base))
    k = np.concatenate(([0.0], np.cumsum(0.5 * h * (g[1:] + g[:-1]))))
    w[m:] = (-np.exp(lwr - base) * k)[::-1]
    return w


def _fix_boundary_rows(w, r, c, h, sign):
    """Make the one-sided end rows of the linearized system exact.

    The integrating-factor solve satisfies the trapezoid cell relations; the
    residual, however, uses one-sided difference rows at the two boundary
    nodes.  Solving those two scalar rows directly removes a slowly decaying
    boundary layer that otherwise limits convergence for slowly decaying data.
    The row enforced at each end is (Dw)[end] + sign * c[end] * w[end] = r[end]
    with D the one-sided three-point stencil.
    """
    w[0] = (r[0] - (4.0 * w[1] - w[2]) / (2.0 * h)) / (-3.0 / (2.0 * h) + sign * c[0])
    w[-1] = (r[-1] + (4.0 * w[-2] - w[-3]) / (2.0 * h)) / (3.0 / (2.0 * h) + sign * c[-1])


def _newton(residual_fn, step_fn, n, tol, max_iter, start=None, stall_tol=None):
    """Damped Newton with integrating-factor linear solves.

    ``step_fn(u, r)`` returns the correction for residual r, re-linearizing at
    the current iterate u; steps are halved (up to 6 times) whenever the
    residual would grow.  When progress per iteration drops below 2% while the
    residual is already under ``stall_tol``, the iterate is accepted with the
    achieved residual (slowly decaying data excites a boundary layer that the
    one-sided end stencils shed only gradually).
    """
    u = np.zeros(n) if start is None else start.copy()
    r = residual_fn(u)
    rmax = float(np.max(np.abs(r)))
    history = [rmax]
    for k in range(max_iter):
        if not math.isfinite(rmax):
            raise SolverError("residual became non-finite", history)
        if rmax <= tol:
            return u, k, rmax, history
        if (stall_tol is not None and rmax <= stall_tol and k >= 3
                and history[-2] - rmax < 0.02 * rmax):
            return u, k, rmax, history
        delta = step_fn(u, r)
        lam = 1.0
        for _ in range(6):
            u_new = u + lam * delta
            r_new = residual_fn(u_new)
            r_new_max = float(np.max(np.abs(r_new)))
            if r_new_max < rmax or not math.isfinite(r_new_max):
                break
            lam *= 0.5
        u, r, rmax = u_new, r_new, r_new_max
        history.append(rmax)
    if rmax <= tol:
        return u, max_iter, rmax, history
    if stall_tol is not None and rmax <= stall_tol:
        return u, max_iter, rmax, history
    raise SolverError(
        f"no convergence after {max_iter} iterations (residual {history[-1]:.3e})",
        history,
    )


def _center_index(grid: GridSpec, center: float = 0.0) -> int:
    return int(np.argmin(np.abs(grid.x - center)))


def _require_parity(values, grid, kind, tol, what):
    defect = parity_check(values, grid, kind)
    if defect > tol:
        raise ContractError(f"{what} must be {kind} (defect {defect:.3e} > {tol:.1e})")


# --- the kink-side maps -------------------------------------------------------

def _solve_kink_lift(grid: GridSpec, y, v, delta: float, tol, max_iter,
                     stall_tol=1e-10):
    """Common core: solve F1 = 0 for u around the static kink, then read off s."""
    mult = 1.0 + delta
    if not mult > 0:
        raise ParameterError(f"need 1 + delta > 0, got delta = {delta}")
    prof = kink_profile(KinkParams(0.0, 0.0))
    x = grid.x
    dy = derivative(y, grid)
    nu0 = 0.5 * (1.0 / mult + mult)
    m = _center_index(grid)
    q_tilde = prof.q_tilde(x)

    def residual(u):
        return _kink_f1(prof, grid, u, derivative(u, grid), y, v, mult)

    def step(u, r):
        arg = q_tilde + u
        c = np.sin(0.5 * (arg + y)) / (2.0 * mult) + (0.5 * mult) * np.sin(0.5 * (arg - y))
        lw = cumulative_quadrature(c, grid)
        lw -= lw[m]
        w = _solve_outward(lw, r, grid.h, m)
        _fix_boundary_rows(w, r, c, grid.h, 1)
        return -w

    u, iters, rmax, history = _newton(residual, step, grid.n_points, tol, max_iter,
                                      stall_tol=stall_tol)
    arg = prof.q_tilde(x) + u
    s = dy + np.cos(0.5 * (arg + y)) / mult - mult * np.cos(0.5 * (arg - y)) - prof.q_t(x)
    return u, s, iters, rmax, history, nu0


def construct_manifold_data(grid: GridSpec, y0, v0, delta: float, *,
                            tol: float = 1e-11, max_iter: int = 50,
                            parity_tol: float = 1e-9) -> LiftReport:
    """Map (y0 odd, v0 even, delta) near the vacuum to the unique (odd, even)
    kink-side data solving the transform with multiplier 1 + delta.

    The Newton linear steps use the integrating factor cosh^{nu0} with
    nu0 = (1/(1+delta) + (1+delta))/2, integrated outward from the center.
    """
    grid.require_symmetric()
    y0 = np.asarray(y0, dtype=float)
    v0 = np.asarray(v0, dtype=float)
    _require_parity(y0, grid, "odd", parity_tol, "y0")
    _require_parity(v0, grid, "even", parity_tol, "v0")
    guard = pair_norm(PerturbationPair(grid, y0, v0))
    if guard >= 0.5:
        raise ContractError(f"input norm {guard:.3f} >= 0.5; outside the solvable ball")
    u, s, iters, rmax, history, nu0 = _solve_kink_lift(grid, y0, v0, delta, tol, max_iter)
    pair = PerturbationPair(grid, u, s, "odd-even", parity_tol=1e-8)
    return LiftReport(pair, iters, rmax, nu0, history)


def lift_zero_to_kink(grid: GridSpec, y, v, *, tol: float = 1e-11,
                      max_iter: int = 50, parity_tol: float = 1e-9) -> LiftReport:
    """Map a small (even, even) vacuum perturbation to the unique (odd, odd)
    perturbation of the static kink (transform parameter fixed at 1)."""
    grid.require_symmetric()
    y = np.asarray(y, dtype=float)
    v = np.asarray(v, dtype=float)
    _require_parity(y, grid, "even", parity_tol, "y")
    _require_parity(v, grid, "even", parity_tol, "v")
    u, s, iters, rmax, history, nu0 = _solve_kink_lift(grid, y, v, 0.0, tol, max_iter)
    pair = PerturbationPair(grid, u, s, "odd-odd", parity_tol=1e-8)
    return LiftReport(pair, iters, rmax, nu0, history)


def descend_kink_to_zero(grid: GridSpec, u, s, *, tol: float = 1e-11,
                         max_iter: int = 50, parity_tol: float = 1e-9) -> LiftReport:
    """Map a small (odd, odd) perturbation of the static kink to the unique
    (even, even) vacuum perturbation (transform parameter 1).

    Solves the second transform equation for y with the decaying integrating
    factor sech x, integrating inward; the compatibility integral vanishes by
    parity and is checked.
    """
    grid.require_symmetric()
    u = np.asarray(u, dtype=float)
    s = np.asarray(s, dtype=float)
    _require_parity(u, grid, "odd", parity_tol, "u")
    _require_parity(s, grid, "odd", parity_tol, "s")
    prof = kink_profile(KinkParams(0.0, 0.0))
    x = grid.x
    du = derivative(u, grid)
    m = _center_index(grid)
    q_tilde = prof.q_tilde(x)

    def residual(y):
        return _kink_f2(prof, grid, u, s, y, derivative(y, grid), 1.0)

    def step(y, r):
        arg = q_tilde + u
        c = 0.5 * (np.sin(0.5 * (arg + y)) + np.sin(0.5 * (arg - y)))
        lw = cumulative_quadrature(c, grid)
        lw -= lw[m]
        w = _solve_inward(lw, r, grid.h, m)
        _fix_boundary_rows(w, r, -c, grid.h, 1)
        return w

    y, iters, rmax, history = _newton(residual, step, grid.n_points, tol, max_iter,
                                      stall_tol=1e-10)
    arg = prof.q_tilde(x) + u
    v = prof.q_x(x) + du - np.cos(0.5 * (arg + y)) - np.cos(0.5 * (arg - y))
    pair = PerturbationPair(grid, y, v, "even-even", parity_tol=1e-8)
    return LiftReport(pair, iters, rmax, 1.0, history)


# --- the wobbler-side maps ----------------------------------------------------

def lift_breather_to_wobbler(grid: GridSpec, y, v, beta: float, t: float, *,
                             tol: float = 1e-11, max_iter: int = 60,
                             parity_tol: float = 1e-9) -> LiftReport:
    """Map a small (even, even) breather perturbation to the unique (odd, odd)
    wobbler perturbation at time t.

    The integrating factor has no closed form; its logarithm is accumulated by
    trapezoid quadrature of sin(W_tilde/2) cos(B/2) and applied in log form.
    """
    grid.require_symmetric()
    if beta == 0 or not abs(beta) < 1:
        raise ParameterError(f"wobbler maps need 0 < |beta| < 1, got {beta}")
    y = np.asarray(y, dtype=float)
    v = np.asarray(v, dtype=float)
    _require_parity(y, grid, "even", parity_tol, "y")
    _require_parity(v, grid, "even", parity_tol, "v")
    bg = _wobbler_background(beta, t, grid)
    dy = derivative(y, grid)
    m = _center_index(grid)

    def residual(u):
        return _wobbler_f1(bg, u, derivative(u, grid), y, v)

    def step(u, r):
        arg_p = 0.5 * (bg["w_tilde"] + u + bg["b"] + y)
        arg_m = 0.5 * (bg["w_tilde"] + u - bg["b"] - y)
        c = 0.5 * (np.sin(arg_p) + np.sin(arg_m))
        lw = cumulative_quadrature(c, grid)
        lw -= lw[m]
        w = _solve_outward(lw, r, grid.h, m)
        _fix_boundary_rows(w, r, c, grid.h, 1)
        return -w

    u, iters, rmax, history = _newton(residual, step, grid.n_points, tol, max_iter,
                                      stall_tol=1e-9)
    arg_p = 0.5 * (bg["w_tilde"] + u + bg["b"] + y)
    arg_m = 0.5 * (bg["w_tilde"] + u - bg["b"] - y)
    s = -bg["w_t"] + bg["b_x"] + dy + np.cos(arg_p) - np.cos(arg_m)
    pair = PerturbationPair(grid, u, s, "odd-odd", parity_tol=1e-8)
    return LiftReport(pair, iters, rmax, 1.0, history)


def descend_wobbler_to_breather(grid: GridSpec, u, s, beta: float, t: float, *,
                                tol: float = 1e-11, max_iter: int = 60,
                                parity_tol: float = 1e-9,
                                compat_tol: float = 1e-10) -> LiftReport:
    """Map a small (odd, odd) wobbler perturbation to the unique (even, even)
    breather perturbation at time t.

    The decaying integrating factor is integrated inward from the boundaries;
    a compatibility integral above `compat_tol` signals parity corruption of
    the inputs and raises.
    """
    grid.require_symmetric()
    if beta == 0 or not abs(beta) < 1:
        raise ParameterError(f"wobbler maps need 0 < |beta| < 1, got {beta}")
    u = np.asarray(u, dtype=float)
    s = np.asarray(s, dtype=float)
    _require_parity(u, grid, "odd", parity_tol, "u")
    _require_parity(s, grid, "odd", parity_tol, "s")
    bg = _wobbler_background(beta, t, grid)
    du = derivative(u, grid)
    m = _center_index(grid)

    def residual(y):
        return _wobbler_f2(bg, u, s, y, derivative(y, grid))

    def step(y, r):
        arg_p = 0.5 * (bg["w_tilde"] + u + bg["b"] + y)
        arg_m = 0.5 * (bg["w_tilde"] + u - bg["b"] - y)
        c = 0.5 * (np.sin(arg_p) + np.sin(arg_m))
        lw = cumulative_quadrature(c, grid)
        lw -= lw[m]
        w = _solve_inward(lw, r, grid.h, m, compat_tol)
        _fix_boundary_rows(w, r, -c, grid.h, 1)
        return w

    y, iters, rmax, history = _newton(residual, step, grid.n_points, tol, max_iter,
                                      stall_tol=1e-9)
    arg_p = 0.5 * (bg["w_tilde"] + u + bg["b"] + y)
    arg_m = 0.5 * (bg["w_tilde"] + u - bg["b"] - y)
    v = bg["w_x"] + du - bg["b_t"] - np.cos(arg_p) - np.cos(arg_m)
    pair = PerturbationPair(grid, y, v, "even-even", parity_tol=1e-8)
    return LiftReport(pair, iters, rmax, 1.0, history)


# --- lifting with an orthogonality constraint ----------------------------------

def lift_with_orthogonality(grid: GridSpec, y, v, delta: float, beta: float,
                            rho: float, t: float, *, tol: float = 1e-11,
                            max_iter: int = 50,
                            ortho_tol: float = 1e-10) -> LiftReport:
    """Solve the kink-centered transform around the moving kink at center
    beta*t + rho, fixing the free integration constant by orthogonality.

    The solution family of the first transform equation is one-dimensional (the
    decaying homogeneous solution cosh^{-nu0}(gamma (x - center)) is free); the
    constant is chosen so that int (u Q_x + s Q_tx) dx = 0.
    """
    if not abs(beta) < 1:
        raise ParameterError(f"|beta| < 1 required, got {beta}")
    mult = 1.0 + delta
    if not mult > 0:
        raise ParameterError(f"need 1 + delta > 0, got delta = {delta}")
    y = np.asarray(y, dtype=float)
    v = np.asarray(v, dtype=float)
    center = beta * t + rho
    if not grid.x_min < center < grid.x_max:
        raise ContractError(f"kink center {center:.3f} outside the grid")
    prof = kink_profile(KinkParams(beta, center))
    x = grid.x
    gamma = prof.gamma
    dy = derivative(y, grid)
    coeff_scale = 0.5 * (1.0 / mult + mult)
    nu0 = coeff_scale / gamma
    xi = gamma * (x - center)
    lw = (coeff_scale / gamma) * (np.abs(xi) + np.log1p(np.exp(-2.0 * np.abs(xi))) - math.log(2.0))
    m = _center_index(grid, center)
    lw = lw - lw[m]
    hom = np.exp(-lw)
    q_x = prof.q_x(x)
    q_tx = prof.q_tx(x)
    norm_sq = quadrature(q_x ** 2 + q_tx ** 2, grid)
    if norm_sq < 1e-8:
        raise SolverError("orthogonality normalization is ill-conditioned")

    q_tilde = prof.q_tilde(x)

    def residual(u):
        return _kink_f1(prof, grid, u, derivative(u, grid), y, v, mult)

    def step(u, r):
        arg = q_tilde + u
        c = np.sin(0.5 * (arg + y)) / (2.0 * mult) + (0.5 * mult) * np.sin(0.5 * (arg - y))
        lw_cur = cumulative_quadrature(c, grid)
        lw_cur -= lw_cur[m]
        w = _solve_outward(lw_cur, r, grid.h, m)
        _fix_boundary_rows(w, r, c, grid.h, 1)
        return -w

    def solve_at(a0, start):
        guess = a0 * hom if start is None else start + (a0 - start[m]) * hom
        u, iters, rmax, history = _newton(residual, step, grid.n_points, tol, max_iter,
                                          start=guess, stall_tol=1e-9)
        arg = prof.q_tilde(x) + u
        s = dy + np.cos(0.5 * (arg + y)) / mult - mult * np.cos(0.5 * (arg - y)) - prof.q_t(x)
        ortho = quadrature(u * q_x + s * q_tx, grid)
        return u, s, iters, rmax, history, ortho

    # scalar secant on the center value a0; the orthogonality functional is
    # affine in a0 to leading order with slope ~ int hom * Q_x
    a_prev, a_cur = 0.0, None
    u, s, iters, rmax, history, g_prev = solve_at(a_prev, None)
    total_iters = iters
    if abs(g_prev) > ortho_tol:
        slope = quadrature(hom * q_x, grid)
        if abs(slope) < 1e-10:
            raise SolverError("orthogonality constraint is degenerate", history)
        a_cur = a_prev - g_prev / slope
        for _ in range(20):
            u, s, iters, rmax, history, g_cur = solve_at(a_cur, u)
            total_iters += iters
            if abs(g_cur) <= ortho_tol:
                g_prev = g_cur
                break
            denom = g_cur - g_prev
            if denom == 0:
                raise SolverError("orthogonality secant stalled", history)
            a_next = a_cur - g_cur * (a_cur - a_prev) / denom
            a_prev, g_prev, a_cur = a_cur, g_cur, a_next
        else:
            raise SolverError("orthogonality constraint did not converge", history)
        g_prev = quadrature(u * q_x + s * q_tx, grid)
    pair = PerturbationPair(grid, u, s, "none")
    return LiftReport(pair, total_iters, rmax, nu0, history, ortho_residual=float(g_prev))


def zero_momentum_manifold_data(grid: GridSpec, y0, *, tol: float = 1e-12,
                                max_iter: int = 12, **solve_kwargs):
    """Kink-side data for (y0, 0) with exactly zero discrete momentum.

    The construction at offset delta = 0 has zero momentum in the continuum;
    on the grid a residue of order h^2 survives, which would mask the
    quadratic smallness of the tracked shift rate.  A scalar Newton iteration
    on delta (slope -4 at delta = 0) removes it.

    Returns (LiftReport, delta).
    """
    from .conserved import momentum as _momentum
    from .grids import FieldState as _FieldState

    y0 = np.asarray(y0, dtype=float)
    prof = kink_profile(KinkParams(0.0, 0.0))
    q = prof.q(grid.x)
    zero = np.zeros_like(y0)
    delta = 0.0
    rep = None
    for _ in range(max_iter):
        rep = construct_manifold_data(grid, y0, zero, delta, **solve_kwargs)
        p = _momentum(_FieldState(0.0, grid, q + rep.result.first, rep.result.second))
        if abs(p) <= tol:
            break
        delta += p / 4.0
    return rep, delta


# --- final speeds ---------------------------------------------------------------

def final_speed_from_momentum(P: float) -> float:
    """The unique beta with -4 beta / sqrt(1 - beta^2) = P."""
    return -P / math.sqrt(P * P + 16.0)


def final_speed_from_delta(delta: float) -> float:
    """The speed whose transform parameter is 1 + delta."""
    a = 1.0 + delta
    if not a > 0:
        raise ParameterError(f"need 1 + delta > 0, got delta = {delta}")
    return (a * a - 1.0) / (a * a + 1.0)
