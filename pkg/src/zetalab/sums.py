"""Gram-indexed pair sums and fourth-power sums with their main terms.

Index inclusion follows t_nu in [t_lo, t_hi); the paired factor
Z^2(t_{nu+1}) may use the Gram point just outside the window.  When the
window is exactly [T, 2T) the established main term is attached:
(3/4pi^5) T ln^5 T for the pair sum, (1/4pi^3) T ln^5 T for the
fourth-power sum.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np

from .config import DEFAULT_CONFIG, DomainError, PrecisionConfig
from .gram import gram_points, gram_range
from .zeta import TWO_PI, hardy_z_many

PAIR_MAIN_CONSTANT = 3.0 / (4.0 * math.pi ** 5)
FOURTH_MAIN_CONSTANT = 1.0 / (4.0 * math.pi ** 3)


@dataclass(frozen=True)
class SumResult:
    t_lo: float
    t_hi: float
    kind: str  # "pair" | "fourth"
    terms: int
    value: float
    main_term: Optional[float]
    ratio: Optional[float]

    def csv_row(self) -> List[str]:
        return [
            self.kind,
            f"{self.t_lo:.15g}",
            str(self.terms),
            f"{self.value:.15g}",
            "" if self.main_term is None else f"{self.main_term:.15g}",
            "" if self.ratio is None else f"{self.ratio:.15g}",
        ]


@dataclass(frozen=True)
class TrendReport:
    kind: str
    heights: List[float]
    ratios: List[float]
    fitted: List[float]  # |r - 1| * ln T
    passed: bool  # |r - 1| non-increasing across the top two heights


def _is_doubling_window(t_lo: float, t_hi: float) -> bool:
    return abs(t_hi - 2.0 * t_lo) <= 1e-9 * t_hi


_SUM_MEMO: dict[tuple, SumResult] = {}
_SUM_LOCK = threading.Lock()


def _gram_sum(
    t_lo: float,
    t_hi: float,
    kind: str,
    config: PrecisionConfig,
) -> SumResult:
    if not (TWO_PI < t_lo < t_hi):
        raise DomainError("sum window requires 2*pi < t_lo < t_hi")
    key = (kind, float(t_lo), float(t_hi), config)
    with _SUM_LOCK:
        if key in _SUM_MEMO:
            return _SUM_MEMO[key]

    rng = gram_range(t_lo, t_hi, config)
    terms = rng.count
    if terms == 0:
        value = 0.0
    else:
        nu_lo = rng.points[0].nu
        nu_hi = rng.points[-1].nu
        if kind == "pair":
            pts = gram_points(nu_lo, nu_hi + 1, config)  # one extra for the pair
            ts = np.array([p.t for p in pts])
            z2 = hardy_z_many(ts, config) ** 2
            value = math.fsum((z2[:-1] * z2[1:]).tolist())
        else:
            ts = np.array([p.t for p in rng.points])
            z = hardy_z_many(ts, config)
            value = math.fsum((z ** 4).tolist())

    main: Optional[float] = None
    ratio: Optional[float] = None
    if _is_doubling_window(t_lo, t_hi):
        const = PAIR_MAIN_CONSTANT if kind == "pair" else FOURTH_MAIN_CONSTANT
        main = const * t_lo * math.log(t_lo) ** 5
        ratio = value / main
    result = SumResult(
        t_lo=float(t_lo), t_hi=float(t_hi), kind=kind,
        terms=terms, value=value, main_term=main, ratio=ratio,
    )
    with _SUM_LOCK:
        _SUM_MEMO[key] = result
    return result


def titchmarsh_sum(
    t_lo: float, t_hi: float, config: PrecisionConfig = DEFAULT_CONFIG
) -> SumResult:
    """sum of Z^2(t_nu) Z^2(t_{nu+1}) over Gram indices with t_nu in [t_lo, t_hi)."""
    return _gram_sum(t_lo, t_hi, "pair", config)


def fourth_power_sum(
    t_lo: float, t_hi: float, config: PrecisionConfig = DEFAULT_CONFIG
) -> SumResult:
    """sum of Z^4(t_nu) over Gram indices with t_nu in [t_lo, t_hi)."""
    return _gram_sum(t_lo, t_hi, "fourth", config)


def verify_asymptotic_trend(
    kind: str,
    heights: Sequence[float],
    config: PrecisionConfig = DEFAULT_CONFIG,
) -> TrendReport:
    """Ratios r(T) over [T, 2T) plus the fitted |r-1| ln T sequence.

    PASS means |r-1| does not increase from the second-highest to the
    highest height.
    """
    if kind not in ("pair", "fourth"):
        raise DomainError("kind must be 'pair' or 'fourth'")
    hs = [float(h) for h in heights]
    if len(hs) < 3 or any(b <= a for a, b in zip(hs, hs[1:])):
        raise DomainError("need at least 3 strictly increasing heights")
    ratios = []
    for T in hs:
        res = _gram_sum(T, 2.0 * T, kind, config)
        assert res.ratio is not None
        ratios.append(res.ratio)
    fitted = [abs(r - 1.0) * math.log(T) for r, T in zip(ratios, hs)]
    passed = abs(ratios[-1] - 1.0) <= abs(ratios[-2] - 1.0)
    return TrendReport(kind=kind, heights=hs, ratios=ratios, fitted=fitted, passed=passed)


def sums_csv_rows(results: Sequence[SumResult]) -> List[List[str]]:
    return [r.csv_row() for r in results]
