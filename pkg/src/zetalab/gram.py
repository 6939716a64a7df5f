"""The Gram sequence theta(t_nu) = pi*nu, nu = 1, 2, ... and range queries."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Sequence

import numpy as np
from scipy.special import lambertw

from .config import DEFAULT_CONFIG, DomainError, PrecisionConfig, RootError
from .zeta import TWO_PI, theta, theta_deriv


@dataclass(frozen=True)
class GramPoint:
    nu: int
    t: float
    residual: float  # |theta(t) - pi*nu|


@dataclass(frozen=True)
class GramRange:
    t_lo: float
    t_hi: float
    points: List[GramPoint]

    @property
    def count(self) -> int:
        return len(self.points)


def _initial_guess(nus: np.ndarray) -> np.ndarray:
    """Invert the theta main term: u ln(u/e) = nu + 1/8 with u = t/2pi."""
    v = (nus + 0.125) / math.e
    return TWO_PI * (nus + 0.125) / np.real(lambertw(v))


def _solve_many(nus: np.ndarray, config: PrecisionConfig) -> np.ndarray:
    """Newton from the asymptotic inverse, then a last-ulp polish.

    theta carries ~1 ulp of its own magnitude in noise, so after Newton
    converges we scan the neighbouring representable t values and keep
    the one with the smallest defining-equation residual.  The residual
    gate is abs_tol with a representability floor: once pi*nu grows past
    ~1e5 the theta values move in steps of several 1e-11 per ulp of t,
    and no double can do better than a few ulp of the target.
    """
    target = np.pi * nus
    t = _initial_guess(nus)
    for _ in range(max(6, config.max_newton_iters // 10)):
        resid = theta(t) - target
        t = t - resid / theta_deriv(t)
    best_t = t.copy()
    best_r = np.abs(theta(best_t) - target)
    eps = np.finfo(float).eps
    for k in range(-6, 7):
        if k == 0:
            continue
        cand = t * (1.0 + k * eps)
        r = np.abs(theta(cand) - target)
        better = r < best_r
        best_t[better] = cand[better]
        best_r[better] = r[better]
    gate = np.maximum(config.abs_tol, 8.0 * eps * np.abs(target))
    bad = best_r > gate
    if bad.any():
        worst = int(np.argmax(best_r - gate))
        raise RootError(
            f"Gram solve residual {best_r[worst]:.3e} > tolerance at nu={int(nus[worst])}"
        )
    return best_t


def gram_point(nu: int, config: PrecisionConfig = DEFAULT_CONFIG) -> GramPoint:
    """The unique root of theta(t) = pi*nu on the increasing branch t > 2pi."""
    if nu < 1:
        raise DomainError("Gram index nu must be >= 1")
    t = _solve_many(np.array([float(nu)]), config)[0]
    return GramPoint(nu=int(nu), t=float(t), residual=float(abs(theta(t) - math.pi * nu)))


def gram_points(nu_lo: int, nu_hi: int, config: PrecisionConfig = DEFAULT_CONFIG) -> List[GramPoint]:
    """Gram points for the inclusive index range [nu_lo, nu_hi]."""
    if nu_lo < 1 or nu_hi < nu_lo:
        raise DomainError("need 1 <= nu_lo <= nu_hi")
    nus = np.arange(nu_lo, nu_hi + 1, dtype=float)
    ts = _solve_many(nus, config)
    res = np.abs(theta(ts) - np.pi * nus)
    return [
        GramPoint(nu=int(n), t=float(t), residual=float(r))
        for n, t, r in zip(nus, ts, res)
    ]


def gram_range(
    t_lo: float, t_hi: float, config: PrecisionConfig = DEFAULT_CONFIG
) -> GramRange:
    """All Gram points with t in the half-open window [t_lo, t_hi).

    Index bounds come from theta at the endpoints; the half-open
    convention makes abutting ranges partition exactly.
    """
    if not (TWO_PI < t_lo < t_hi):
        raise DomainError("gram_range requires 2*pi < t_lo < t_hi")
    lo = max(1, int(math.ceil(theta(t_lo) / math.pi)))
    hi = int(math.floor(theta(t_hi) / math.pi))
    if hi < lo:
        return GramRange(t_lo=t_lo, t_hi=t_hi, points=[])
    pts = gram_points(lo, hi, config)
    pts = [p for p in pts if t_lo <= p.t < t_hi]
    return GramRange(t_lo=t_lo, t_hi=t_hi, points=pts)


def gram_count_estimate(T: float) -> float:
    """The crude (1/2pi) T ln T count scale for Gram points below T."""
    if not T > math.e:
        raise DomainError("gram_count_estimate requires T > e")
    return T * math.log(T) / TWO_PI


def gram_csv_rows(points: Sequence[GramPoint]) -> List[List[str]]:
    """`nu,t,residual` rows at 15 significant digits."""
    return [[str(p.nu), f"{p.t:.15g}", f"{p.residual:.15g}"] for p in points]
