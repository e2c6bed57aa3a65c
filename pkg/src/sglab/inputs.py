"""Named generators for perturbation inputs used by the CLI and test suites."""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .grids import GridSpec, ParameterError, PerturbationPair
from .solutions import WobblerParams, breather, kink, KinkParams, wobbler

__all__ = ["smooth_random", "named_pair", "load_pair", "save_pair"]


def smooth_random(grid: GridSpec, parity: str, amplitude: float, rng) -> np.ndarray:
    """Smooth, exponentially localized random profile with exact parity.

    A sum of three modulated Gaussian bumps, symmetrized by construction and
    rescaled to the requested max amplitude.
    """
    if parity not in ("odd", "even"):
        raise ParameterError(f"parity must be odd or even, got {parity!r}")
    x = grid.x
    out = np.zeros_like(x)
    for _ in range(3):
        a = rng.normal()
        width = rng.uniform(1.5, 4.0)
        k = rng.uniform(0.2, 1.2)
        bump = np.exp(-((x / width) ** 2)) * np.cos(k * x)
        if parity == "odd":
            bump = bump * np.tanh(x)
        out += a * bump
    peak = float(np.max(np.abs(out)))
    return amplitude * out / peak if peak > 0 else out


def named_pair(name: str, grid: GridSpec, *, amplitude: float = 0.05,
               beta: float = 0.5, t: float = 0.0, seed: int = 0) -> PerturbationPair:
    """Build a perturbation pair from a generator name.

    Known names: ``zero``, ``even-bump``, ``odd-bump``, ``random-even``,
    ``random-odd``, ``breather-state`` (the breather and its time derivative at
    time t), ``wobbler-perturbation`` (wobbler minus kink and the wobbler time
    derivative at time t).
    """
    x = grid.x
    zero = np.zeros_like(x)
    if name == "zero":
        return PerturbationPair(grid, zero, zero.copy())
    if name == "even-bump":
        f = amplitude * np.exp(-((x / 3.0) ** 2))
        return PerturbationPair(grid, f, zero, "even-even")
    if name == "odd-bump":
        f = amplitude * np.tanh(x) * np.exp(-((x / 3.0) ** 2))
        return PerturbationPair(grid, f, zero, "odd-even")
    if name in ("random-even", "random-odd"):
        parity = name.split("-")[1]
        rng = np.random.default_rng(seed)
        first = smooth_random(grid, parity, amplitude, rng)
        second = smooth_random(grid, parity, amplitude, rng)
        tag = f"{parity}-{parity}"
        return PerturbationPair(grid, first, second, tag)
    if name == "breather-state":
        b = breather(beta)
        return PerturbationPair(grid, np.asarray(b.value(t, x), dtype=float),
                                np.asarray(b.dvalue_dt(t, x), dtype=float),
                                "even-even", parity_tol=1e-8)
    if name == "wobbler-perturbation":
        w = wobbler(WobblerParams(beta))
        k = kink(KinkParams(0.0))
        first = np.asarray(w.value(t, x), dtype=float) - np.asarray(k.value(t, x), dtype=float)
        second = np.asarray(w.dvalue_dt(t, x), dtype=float)
        return PerturbationPair(grid, first, second, "odd-odd", parity_tol=1e-8)
    raise ParameterError(f"unknown input generator {name!r}")


def save_pair(path, pair: PerturbationPair):
    """Store a pair with its grid as JSON."""
    payload = {
        "x_min": pair.grid.x_min,
        "x_max": pair.grid.x_max,
        "n_points": pair.grid.n_points,
        "first": pair.first.tolist(),
        "second": pair.second.tolist(),
    }
    Path(path).write_text(json.dumps(payload))


def load_pair(path) -> PerturbationPair:
    """Load a pair saved by save_pair."""
    payload = json.loads(Path(path).read_text())
    grid = GridSpec(payload["x_min"], payload["x_max"], payload["n_points"])
    return PerturbationPair(grid, np.array(payload["first"], dtype=float),
                            np.array(payload["second"], dtype=float))
