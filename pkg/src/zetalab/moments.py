"""Interval moments of |zeta|^2 and |S1|^{2l}, and the empirical c-bar(l).

c-bar(l) has no closed form available here; it is fitted from a window
moment and always reported together with its sub-window spread, then
persisted to a small JSON constants cache for downstream consumers.
"""

from __future__ import annotations

import json
import math
import os
import time
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional, Sequence

import numpy as np
from numpy.polynomial.legendre import leggauss

from .argz import S1Evaluator, shared_s1_evaluator
from .config import DEFAULT_CONFIG, DomainError, PrecisionConfig, PrecisionError
from .quad import critical_panel_width, integrate_checked, offline_panel_width
from .zeta import RS_CROSSOVER, em_error_bound, hardy_z_many, rs_error_bound, zeta_abs2_line

# Window-exponent constraint T^a <= H <= T from the Selberg-moment
# formula, with a fixed once for reproducibility.
CBAR_WINDOW_EXPONENT = 0.6


@dataclass(frozen=True)
class MomentEstimate:
    t_lo: float
    t_hi: float
    kind: str  # "critical2" | "sigma2" | "s1moment"
    param: Optional[float]  # sigma for sigma2, l for s1moment
    value: float
    per_unit: float
    quad_error: float

    def csv_row(self) -> List[str]:
        return [
            self.kind,
            "" if self.param is None else f"{self.param:.15g}",
            f"{self.t_lo:.15g}",
            f"{self.t_hi:.15g}",
            f"{self.value:.15g}",
            f"{self.per_unit:.15g}",
            f"{self.quad_error:.15g}",
        ]


@dataclass(frozen=True)
class CbarEstimate:
    l: int
    T: float
    H: float
    cbar: float
    spread: float  # max deviation of the four sub-window estimates

    @property
    def cache_key(self) -> str:
        return f"cbar/l={self.l}/T={self.T:.15g}/H={self.H:.15g}"


def _finish(t_lo: float, t_hi: float, kind: str, param, value: float, err: float) -> MomentEstimate:
    width = t_hi - t_lo
    per_unit = value / width if width > 0 else 0.0
    return MomentEstimate(
        t_lo=t_lo, t_hi=t_hi, kind=kind, param=param,
        value=value, per_unit=per_unit, quad_error=err,
    )


def second_moment_critical(
    t_lo: float, t_hi: float, config: PrecisionConfig = DEFAULT_CONFIG
) -> MomentEstimate:
    """Hardy-Littlewood integral of Z(t)^2 over [t_lo, t_hi]."""
    if not (0.0 <= t_lo <= t_hi):
        raise DomainError("need 0 <= t_lo <= t_hi")
    if t_lo == t_hi:
        return _finish(t_lo, t_hi, "critical2", None, 0.0, 0.0)
    if t_hi >= RS_CROSSOVER:
        bound = float(rs_error_bound(t_hi))
        if bound > config.eval_tol:
            raise PrecisionError(
                f"Z attainable only to {bound:.2e} on [{t_lo}, {t_hi}]", achievable=bound
            )
    width = critical_panel_width(t_hi, config)

    def f(ts: np.ndarray) -> np.ndarray:
        z = hardy_z_many(ts, config)
        return z * z

    value, err = integrate_checked(f, t_lo, t_hi, width, order=8, what="critical2")
    return _finish(t_lo, t_hi, "critical2", None, value, err)


def second_moment_sigma(
    sigma: float,
    t_lo: float,
    t_hi: float,
    config: PrecisionConfig = DEFAULT_CONFIG,
    eps: float = 0.01,
) -> MomentEstimate:
    """Second moment of |zeta(sigma+it)| over [t_lo, t_hi], sigma >= 1/2 + eps."""
    if sigma < 0.5 + eps:
        raise DomainError(f"sigma must be >= 1/2 + {eps}")
    if not (t_lo <= t_hi):
        raise DomainError("need t_lo <= t_hi")
    if t_lo == t_hi:
        return _finish(t_lo, t_hi, "sigma2", sigma, 0.0, 0.0)
    bound = em_error_bound(sigma, t_hi, config)
    if bound > config.eval_tol:
        raise PrecisionError(
            f"zeta({sigma}+it) attainable only to {bound:.2e} on [{t_lo}, {t_hi}]",
            achievable=bound,
        )
    width = offline_panel_width(t_hi, config)

    def f(ts: np.ndarray) -> np.ndarray:
        return zeta_abs2_line(sigma, ts, config)

    value, err = integrate_checked(f, t_lo, t_hi, width, order=8, what="sigma2")
    return _finish(t_lo, t_hi, "sigma2", sigma, value, err)


_GL10 = leggauss(10)


def s1_moment(
    l: int,
    t_lo: float,
    t_hi: float,
    config: PrecisionConfig = DEFAULT_CONFIG,
    evaluator: Optional[S1Evaluator] = None,
) -> MomentEstimate:
    """integral of |S1(t)|^{2l} over [t_lo, t_hi].

    S1 is piecewise smooth with kinks exactly at the zero ordinates, so
    panels are the zero gaps (split to the step cap's coarse bound) and
    Gauss nodes never straddle a kink.
    """
    if l < 1:
        raise DomainError("l must be >= 1")
    if not (0.0 <= t_lo <= t_hi):
        raise DomainError("need 0 <= t_lo <= t_hi")
    if t_lo == t_hi:
        return _finish(t_lo, t_hi, "s1moment", float(l), 0.0, 0.0)
    ev = evaluator if evaluator is not None else shared_s1_evaluator(config)
    ev.ensure(t_hi)
    knots = ev.zeros_in(t_lo, t_hi)
    edges = np.concatenate([[t_lo], knots, [t_hi]])
    # split any gap wider than 2.0 to keep panel degree adequate
    refined = [edges[0]]
    for e in edges[1:]:
        prev = refined[-1]
        n_extra = int((e - prev) // 2.0)
        for j in range(1, n_extra + 1):
            refined.append(prev + (e - prev) * j / (n_extra + 1))
        refined.append(e)
    edges = np.array(refined)

    x, w = _GL10
    mid = 0.5 * (edges[:-1] + edges[1:])
    half = 0.5 * (edges[1:] - edges[:-1])
    nodes = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    vals = np.abs(ev.value_many(nodes)) ** (2 * l)
    per_panel = (vals.reshape(len(mid), len(x)) @ w) * half
    value = math.fsum(per_panel.tolist())

    # a-posteriori: compare against per-panel halving
    mids = mid
    nodes_a = (0.5 * (edges[:-1] + mids)[:, None] + 0.5 * (mids - edges[:-1])[:, None] * x[None, :]).ravel()
    nodes_b = (0.5 * (mids + edges[1:])[:, None] + 0.5 * (edges[1:] - mids)[:, None] * x[None, :]).ravel()
    va = (np.abs(ev.value_many(nodes_a)) ** (2 * l)).reshape(len(mid), len(x)) @ w * (0.5 * half)
    vb = (np.abs(ev.value_many(nodes_b)) ** (2 * l)).reshape(len(mid), len(x)) @ w * (0.5 * half)
    fine = va + vb
    err = math.fsum(np.abs(fine - per_panel).tolist())
    refined_value = math.fsum(fine.tolist())
    if err > 0.01 * max(abs(refined_value), 1e-300) and err > 1e-12:
        raise PrecisionError(
            f"s1moment: quadrature error {err:.3e} exceeds 1% of value {refined_value:.6e}",
            achievable=err,
        )
    return _finish(t_lo, t_hi, "s1moment", float(l), refined_value, err)


def estimate_cbar(
    l: int,
    T: float,
    H: float,
    config: PrecisionConfig = DEFAULT_CONFIG,
    cache: Optional["ConstantsCache"] = None,
) -> CbarEstimate:
    """Empirical Selberg-moment constant: moment over [T, T+H] divided by H.

    Enforces the window constraint T^a <= H <= T (a = 0.6), reports the
    spread across four equal sub-windows, and persists the estimate to
    the constants cache (the default one honours $ZLAB_CACHE_DIR).
    """
    if l < 1:
        raise DomainError("l must be >= 1")
    if not (T > 0 and H > 0):
        raise DomainError("T and H must be positive")
    if not (T ** CBAR_WINDOW_EXPONENT <= H <= T):
        raise DomainError(
            f"window constraint violated: need T^{CBAR_WINDOW_EXPONENT} <= H <= T"
        )
    ev = shared_s1_evaluator(config)
    full = s1_moment(l, T, T + H, config, evaluator=ev)
    cbar = full.value / H
    subs = []
    for j in range(4):
        sub = s1_moment(l, T + j * H / 4.0, T + (j + 1) * H / 4.0, config, evaluator=ev)
        subs.append(sub.value / (H / 4.0))
    spread = max(abs(c - cbar) for c in subs)
    est = CbarEstimate(l=int(l), T=float(T), H=float(H), cbar=float(cbar), spread=float(spread))
    (cache if cache is not None else ConstantsCache()).put(est)
    return est


class ConstantsCache:
    """JSON file of fitted constants, keyed "cbar/l=<l>/T=<T>/H=<H>".

    Location: explicit path, else $ZLAB_CACHE_DIR/constants.json, else
    ./.zetalab_cache/constants.json.
    """

    def __init__(self, path: Optional[str] = None):
        if path is None:
            base = os.environ.get("ZLAB_CACHE_DIR", ".zetalab_cache")
            path = os.path.join(base, "constants.json")
        self.path = Path(path)

    def _load(self) -> dict:
        if self.path.exists():
            with open(self.path, "r", encoding="utf-8") as f:
                return json.load(f)
        return {}

    def put(self, est: CbarEstimate) -> str:
        data = self._load()
        data[est.cache_key] = {
            "cbar": est.cbar,
            "spread": est.spread,
            "timestamp": time.strftime("%Y-%m-%dT%H:%M:%S"),
        }
        self.path.parent.mkdir(parents=True, exist_ok=True)
        with open(self.path, "w", encoding="utf-8") as f:
            json.dump(data, f, indent=2, sort_keys=True)
        return est.cache_key

    def get(self, l: int, T: float, H: float) -> Optional[CbarEstimate]:
        key = f"cbar/l={int(l)}/T={float(T):.15g}/H={float(H):.15g}"
        rec = self._load().get(key)
        if rec is None:
            return None
        return CbarEstimate(l=int(l), T=float(T), H=float(H), cbar=rec["cbar"], spread=rec["spread"])

    def keys(self) -> List[str]:
        return sorted(self._load().keys())


def moments_csv_rows(estimates: Sequence[MomentEstimate]) -> List[List[str]]:
    return [e.csv_row() for e in estimates]
