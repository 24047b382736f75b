"""Water-filling over a noise spectrum: water level, optimal input spectrum,
and nonfeedback capacity in bits per channel use."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .spectrum import (
    DEFAULT_QUADRATURE,
    PsdSpec,
    QuadratureConfig,
    _bisect_scalar,
    mean_integral,
    psd_eval,
    psd_zeros,
)

_GL32_NODES, _GL32_WEIGHTS = np.polynomial.legendre.leggauss(32)


@dataclass(frozen=True)
class WaterfillSolution:
    power: float
    water_level: float
    capacity_bits: float
    power_residual: float
    input_psd: object = field(compare=False)  # callable theta -> (nu - S_Z)^+
    band_crossings: tuple = ()


@lru_cache(maxsize=64)
def _scan(spec: PsdSpec):
    grid = np.linspace(0.0, math.pi, 4097)
    return grid, psd_eval(spec, grid)


def _approx_crossings(grid, svals, nu):
    """Linear-interpolated solutions of S(theta) = nu on the scan grid."""
    d = svals - nu
    sign_change = d[:-1] * d[1:] < 0
    idx = np.nonzero(sign_change)[0]
    if idx.size == 0:
        return np.empty(0)
    frac = d[idx] / (d[idx] - d[idx + 1])
    return grid[idx] + frac * (grid[idx + 1] - grid[idx])


def _interval_edges(spec, crossings):
    edges = [0.0, math.pi]
    edges.extend(float(c) for c in crossings)
    if spec.form == "samples":
        edges.extend(np.linspace(0.0, math.pi, len(spec.values)))
    return np.unique(np.asarray(edges))


def _filled_power(spec, nu, edges):
    """Mean of (nu - S)^+ over [-pi, pi], exploiting even symmetry."""
    lo, hi = edges[:-1], edges[1:]
    keep = (hi - lo) > 1e-15
    c = 0.5 * (lo + hi)[keep]
    h = 0.5 * (hi - lo)[keep]
    pts = (c[:, None] + h[:, None] * _GL32_NODES[None, :]).ravel()
    wts = (h[:, None] * _GL32_WEIGHTS[None, :]).ravel()
    y = np.maximum(nu - psd_eval(spec, pts), 0.0)
    return float(wts @ y) / math.pi


def _solve_level(spec: PsdSpec, power: float):
    """Bisection on nu: the filled power is continuous and strictly
    increasing in nu above min S, so the bracket [min S, max S + P] always
    converges."""
    if power <= 0:
        raise ValueError("power budget must be positive")
    grid, svals = _scan(spec)
    smin, smax = float(svals.min()), float(svals.max())
    lo, hi = smin, smax + power
    width_target = 1e-12 * (smax + power)
    while hi - lo > width_target:
        nu = 0.5 * (lo + hi)
        edges = _interval_edges(spec, _approx_crossings(grid, svals, nu))
        if _filled_power(spec, nu, edges) < power:
            lo = nu
        else:
            hi = nu
    nu = 0.5 * (lo + hi)
    # polish the crossing locations for use as quadrature edges downstream
    crossings = []
    h = grid[1] - grid[0]
    for x in _approx_crossings(grid, svals, nu):
        crossings.append(_bisect_scalar(
            lambda th: psd_eval(spec, th) - nu,
            max(x - h, 0.0), min(x + h, math.pi)))
    return nu, tuple(sorted(crossings))


def water_level(psd: PsdSpec, power: float,
                config: QuadratureConfig | None = None) -> float:
    """Water level nu with mean((nu - S_Z)^+) = power."""
    nu, _ = _solve_level(psd, power)
    return nu


@lru_cache(maxsize=1024)
def _capacity_cached(psd, power, config):
    nu, crossings = _solve_level(psd, power)
    zeros = psd_zeros(psd)
    singular = tuple(zeros) + crossings

    def gain(th):
        sz = np.maximum(psd_eval(psd, th), 1e-300)
        return 0.5 * np.log2(np.maximum(sz, nu) / sz)

    capacity = mean_integral(gain, config, singular_points=singular)
    residual = abs(mean_integral(
        lambda th: np.maximum(nu - psd_eval(psd, th), 0.0),
        config, singular_points=crossings) - power)
    return nu, crossings, capacity, residual


def nonfeedback_capacity(psd: PsdSpec, power: float,
                         config: QuadratureConfig | None = None) -> WaterfillSolution:
    """Water-filling solution and capacity mean(0.5*log2(max(S, nu)/S))."""
    cfg = config or DEFAULT_QUADRATURE
    nu, crossings, capacity, residual = _capacity_cached(psd, float(power), cfg)

    def input_psd(th):
        return np.maximum(nu - psd_eval(psd, th), 0.0)

    return WaterfillSolution(
        power=float(power),
        water_level=nu,
        capacity_bits=capacity,
        power_residual=residual,
        input_psd=input_psd,
        band_crossings=crossings,
    )
