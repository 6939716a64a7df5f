"""Reverse iterations of the ladder map and their partition properties.

The reverse step is defined operationally: U = T^1 solves

    integral_T^U Z(t)^2 dt = (1 - c) * T,      c = Euler-Mascheroni gamma,

i.e. the almost-linear increment formula with its error term dropped.
Chains T < T^1 < ... < T^k then partition both the segment and the
second-moment integral into asymptotically equal parts.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from typing import List

import numpy as np
from numpy.polynomial.legendre import leggauss

from .config import DEFAULT_CONFIG, DomainError, PrecisionConfig, RootError
from .moments import second_moment_critical
from .quad import critical_panel_width, gauss_panels
from .zeta import EULER_GAMMA, hardy_z_many


@dataclass(frozen=True)
class LadderChain:
    base: float
    iterates: List[float]  # T^1 < T^2 < ... < T^k
    residuals: List[float]  # per-step |integral - (1-c) T^{r-1}|
    euler_c: float = EULER_GAMMA

    @property
    def k(self) -> int:
        return len(self.iterates)

    def heights(self) -> List[float]:
        return [self.base] + list(self.iterates)


@dataclass(frozen=True)
class PartitionReport:
    gap_ratios: List[float]  # (T^{r+1}-T^r) / (T^r - T^{r-1})
    integral_ratios: List[float]  # consecutive slice second moments
    gap_prediction_ratios: List[float]  # gap / ((1-c) T^{r-1} / ln T^{r-1})


_GL16 = leggauss(16)


def _partial_panel(a: float, u: float, config: PrecisionConfig) -> float:
    """integral of Z^2 over [a, u] inside one panel (single GL16)."""
    if u <= a:
        return 0.0
    x, w = _GL16
    mid = 0.5 * (a + u)
    half = 0.5 * (u - a)
    z = hardy_z_many(mid + half * x, config)
    return float(np.sum(z * z * w) * half)


_REVERSE_MEMO: dict[tuple, float] = {}
_REVERSE_LOCK = threading.Lock()


def reverse_iterate(T: float, config: PrecisionConfig = DEFAULT_CONFIG) -> float:
    """The first reverse iterate T^1 of T (see module docstring).

    Bracketed cumulative quadrature from the predicted gap, then a
    safeguarded Newton/bisection polish inside the final panel.  The
    defining-equation residual must come out below abs_tol * T.
    """
    T = float(T)
    if not (T >= 100.0):
        raise DomainError("reverse_iterate requires T >= 100")
    key = (T, config)
    with _REVERSE_LOCK:
        if key in _REVERSE_MEMO:
            return _REVERSE_MEMO[key]

    target = (1.0 - EULER_GAMMA) * T
    gap0 = target / math.log(T)
    width = critical_panel_width(T + 3.0 * gap0, config)

    hi = T + 2.2 * gap0
    for _ in range(8):
        nodes, weights = gauss_panels(T, hi, width, order=8)
        z = hardy_z_many(nodes, config)
        per_panel = (z * z * weights).reshape(-1, 8).sum(axis=1)
        cum = np.concatenate([[0.0], np.cumsum(per_panel)])
        if cum[-1] >= target:
            break
        hi = T + (hi - T) * 1.6
    else:
        raise RootError(f"failed to bracket the reverse iterate of T={T}")

    edges = np.linspace(T, hi, len(per_panel) + 1)
    i = int(np.searchsorted(cum, target)) - 1
    i = max(0, min(i, len(per_panel) - 1))
    base = float(cum[i])
    a, b = float(edges[i]), float(edges[i + 1])
    panel_lo = a

    def g(u: float) -> float:
        return base + _partial_panel(panel_lo, u, config) - target

    lo_, hi_ = a, b
    u = 0.5 * (a + b)
    for _ in range(config.max_newton_iters + 60):
        gu = g(u)
        if gu > 0:
            hi_ = u
        else:
            lo_ = u
        # Newton with derivative Z(u)^2; rejected near zeros of Z or when
        # the step leaves the bracket, falling back to bisection.
        zu = float(hardy_z_many(np.array([u]), config)[0])
        deriv = zu * zu
        u_next = 0.5 * (lo_ + hi_)
        if deriv > 1e-8:
            cand = u - gu / deriv
            if lo_ < cand < hi_:
                u_next = cand
        if abs(u_next - u) < 1e-13 * T:
            u = u_next
            break
        u = u_next

    resid = abs(g(u))
    if resid > config.abs_tol * T:
        raise RootError(
            f"reverse_iterate residual {resid:.3e} exceeds abs_tol*T at T={T}"
        )
    with _REVERSE_LOCK:
        _REVERSE_MEMO[key] = u
    return u


def ladder_chain(T: float, k: int, config: PrecisionConfig = DEFAULT_CONFIG) -> LadderChain:
    """k reverse iterates of T with their defining-equation residuals."""
    if not (1 <= k <= 20):
        raise DomainError("need 1 <= k <= 20")
    iterates: List[float] = []
    residuals: List[float] = []
    cur = float(T)
    for _ in range(k):
        nxt = reverse_iterate(cur, config)
        target = (1.0 - EULER_GAMMA) * cur
        got = second_moment_critical(cur, nxt, config).value
        iterates.append(nxt)
        residuals.append(abs(got - target))
        cur = nxt
    return LadderChain(base=float(T), iterates=iterates, residuals=residuals)


def partition_report(chain: LadderChain, config: PrecisionConfig = DEFAULT_CONFIG) -> PartitionReport:
    """The three ratio families behind the equidistant-partition claims."""
    if chain.k < 2:
        raise DomainError("partition_report needs a chain with k >= 2")
    hs = chain.heights()
    gaps = [hs[r + 1] - hs[r] for r in range(chain.k)]
    slices = [
        second_moment_critical(hs[r], hs[r + 1], config).value for r in range(chain.k)
    ]
    gap_ratios = [gaps[r + 1] / gaps[r] for r in range(chain.k - 1)]
    integral_ratios = [slices[r + 1] / slices[r] for r in range(chain.k - 1)]
    preds = [
        (1.0 - chain.euler_c) * hs[r] / math.log(hs[r]) for r in range(chain.k)
    ]
    gap_prediction_ratios = [gaps[r] / preds[r] for r in range(chain.k)]
    return PartitionReport(
        gap_ratios=gap_ratios,
        integral_ratios=integral_ratios,
        gap_prediction_ratios=gap_prediction_ratios,
    )


def ladder_csv_rows(chain: LadderChain, config: PrecisionConfig = DEFAULT_CONFIG) -> List[List[str]]:
    """`r,T_r,gap,slice_integral,residual` rows."""
    rows = []
    hs = chain.heights()
    for r in range(1, len(hs)):
        gap = hs[r] - hs[r - 1]
        sl = second_moment_critical(hs[r - 1], hs[r], config).value
        rows.append(
            [
                str(r),
                f"{hs[r]:.15g}",
                f"{gap:.15g}",
                f"{sl:.15g}",
                f"{chain.residuals[r - 1]:.15g}",
            ]
        )
    return rows
