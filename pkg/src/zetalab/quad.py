"""Panel Gauss-Legendre quadrature with deterministic reductions.

Panel meshes are generated from the interval endpoints alone, node
blocks are fixed-size, and cross-panel reduction uses math.fsum (exactly
rounded, hence independent of evaluation order and worker count).
"""

from __future__ import annotations

import math
from typing import Callable, Tuple

import numpy as np
from numpy.polynomial.legendre import leggauss

from .config import DEFAULT_CONFIG, DomainError, PrecisionConfig, PrecisionError

TWO_PI = 2.0 * math.pi

_GL_CACHE: dict[int, Tuple[np.ndarray, np.ndarray]] = {}


def _gl(order: int) -> Tuple[np.ndarray, np.ndarray]:
    if order not in _GL_CACHE:
        _GL_CACHE[order] = leggauss(order)
    return _GL_CACHE[order]


def critical_panel_width(t: float, config: PrecisionConfig = DEFAULT_CONFIG) -> float:
    """Panel-width rule for critical-line integrands: no wider than the
    step cap, and no wider than a quarter of the local zero gap
    2pi/ln(t/2pi)."""
    t = max(float(t), 20.0)
    gap = TWO_PI / math.log(t / TWO_PI)
    return min(config.quad_step_cap, 0.25 * gap)


def offline_panel_width(t: float, config: PrecisionConfig = DEFAULT_CONFIG) -> float:
    """Panel width off the critical line, where |zeta(sigma+it)|^2 varies
    on the O(1) scale rather than the zero-gap scale."""
    return config.offline_panel_factor * critical_panel_width(t, config)


def panel_edges(a: float, b: float, width: float) -> np.ndarray:
    if not (b >= a):
        raise DomainError("integration interval must have a <= b")
    if a == b:
        return np.array([a, b])
    n = max(1, int(math.ceil((b - a) / width)))
    return np.linspace(a, b, n + 1)


def gauss_panels(
    a: float, b: float, width: float, order: int
) -> Tuple[np.ndarray, np.ndarray]:
    """Nodes and weights of per-panel Gauss-Legendre over [a, b]."""
    edges = panel_edges(a, b, width)
    x, w = _gl(order)
    mid = 0.5 * (edges[:-1] + edges[1:])
    half = 0.5 * (edges[1:] - edges[:-1])
    nodes = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    return nodes, weights


def integrate_panels(
    f: Callable[[np.ndarray], np.ndarray],
    a: float,
    b: float,
    width: float,
    order: int = 8,
) -> Tuple[float, float]:
    """Integrate f over [a, b]; returns (value, error_estimate).

    The error estimate comes from comparing each panel against its two
    halves; the returned value is the refined (halved-panel) one.
    """
    if a == b:
        return 0.0, 0.0
    edges = panel_edges(a, b, width)
    x, w = _gl(order)

    def panel_vals(e0: np.ndarray, e1: np.ndarray) -> np.ndarray:
        mid = 0.5 * (e0 + e1)
        half = 0.5 * (e1 - e0)
        nodes = (mid[:, None] + half[:, None] * x[None, :]).ravel()
        vals = f(nodes).reshape(len(e0), order)
        return vals @ w * half

    coarse = panel_vals(edges[:-1], edges[1:])
    mids = 0.5 * (edges[:-1] + edges[1:])
    fine = panel_vals(edges[:-1], mids) + panel_vals(mids, edges[1:])
    value = math.fsum(fine.tolist())
    err = math.fsum(np.abs(fine - coarse).tolist())
    return value, err


def integrate_checked(
    f: Callable[[np.ndarray], np.ndarray],
    a: float,
    b: float,
    width: float,
    order: int = 8,
    rel_gate: float = 0.01,
    what: str = "integral",
) -> Tuple[float, float]:
    """integrate_panels plus the moments-module acceptance gate: the
    a-posteriori estimate must stay below rel_gate of the value."""
    value, err = integrate_panels(f, a, b, width, order)
    if err > rel_gate * max(abs(value), 1e-300) and err > 1e-12:
        raise PrecisionError(
            f"{what}: quadrature error {err:.3e} exceeds {rel_gate:.0%} of value {value:.6e}",
            achievable=err,
        )
    return value, err
