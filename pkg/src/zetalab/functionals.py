"""Quotient formulas and the three cross-bred limit functionals.

Each functional couples a window-integral quotient over one ladder step
[T, T^1] with a Gram-indexed sum over [T, 2T), after the substitution
T = K * x * tau:

    kind A:  K = 4pi^5 / (3 zeta^5(2 sigma)),  pair sum,  sigma-line quotient
    kind B:  K = 4pi^5 / (3 cbar(l)^5),        pair sum,  S1-moment quotient
    kind C:  K = 4pi^3 / zeta^5(2 sigma),      fourth sum, sigma-line quotient

value(x, tau) = (1/tau) * num^5 * den^-5 * sum, which tends to x as
tau grows.  T is always computed as K * (x * tau) - the parenthesised
product makes value(x, tau) = x * value(1, x*tau) hold to round-off
exactly, since both calls then hit bitwise-identical windows.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from typing import List, Optional

from scipy.special import zeta as real_zeta

from .config import CacheMissError, DEFAULT_CONFIG, DomainError, PrecisionConfig
from .ladders import reverse_iterate
from .moments import CbarEstimate, s1_moment, second_moment_critical, second_moment_sigma
from .sums import SumResult, fourth_power_sum, titchmarsh_sum

MIN_IMPLIED_T = 100.0


@dataclass(frozen=True)
class FunctionalApproximant:
    kind: str  # "A" | "B" | "C"
    x: float
    param: float  # sigma for A/C, l for B
    tau: float
    T: float
    T1: float
    value: float
    target: float
    rel_err: float
    cbar_key: Optional[str] = None

    def csv_row(self) -> List[str]:
        return [
            self.kind,
            f"{self.x:.15g}",
            f"{self.param:.15g}",
            f"{self.tau:.15g}",
            f"{self.T:.15g}",
            f"{self.value:.15g}",
            f"{self.rel_err:.15g}",
        ]


@dataclass(frozen=True)
class ChainReport:
    x: float
    sigma: float
    l: int
    implied_T: float
    values: dict
    rel_errs: dict
    pairwise_dev: dict
    passed: bool


def substitution_constant(
    kind: str, sigma: Optional[float] = None, cbar: Optional[CbarEstimate] = None
) -> float:
    """The K of T = K * x * tau for each functional kind."""
    if kind == "A":
        if sigma is None:
            raise DomainError("kind A needs sigma")
        return 4.0 * math.pi ** 5 / (3.0 * float(real_zeta(2.0 * sigma)) ** 5)
    if kind == "B":
        if cbar is None:
            raise CacheMissError("kind B needs a cached CbarEstimate")
        return 4.0 * math.pi ** 5 / (3.0 * cbar.cbar ** 5)
    if kind == "C":
        if sigma is None:
            raise DomainError("kind C needs sigma")
        return 4.0 * math.pi ** 3 / float(real_zeta(2.0 * sigma)) ** 5
    raise DomainError(f"unknown functional kind {kind!r}")


_WINDOW_MEMO: dict[tuple, float] = {}
_WINDOW_LOCK = threading.Lock()


def _memoized(key: tuple, compute) -> float:
    with _WINDOW_LOCK:
        if key in _WINDOW_MEMO:
            return _WINDOW_MEMO[key]
    val = compute()
    with _WINDOW_LOCK:
        _WINDOW_MEMO[key] = val
    return val


def _crit_window(T: float, config: PrecisionConfig) -> float:
    U = reverse_iterate(T, config)
    return _memoized(
        ("crit", T, config), lambda: second_moment_critical(T, U, config).value
    )


def _sigma_window(sigma: float, T: float, config: PrecisionConfig) -> float:
    U = reverse_iterate(T, config)
    return _memoized(
        ("sigma", float(sigma), T, config),
        lambda: second_moment_sigma(sigma, T, U, config).value,
    )


def _s1_window(l: int, T: float, config: PrecisionConfig) -> float:
    U = reverse_iterate(T, config)
    return _memoized(
        ("s1", int(l), T, config), lambda: s1_moment(l, T, U, config).value
    )


def quotient_zeta(sigma: float, T: float, config: PrecisionConfig = DEFAULT_CONFIG) -> float:
    """Ratio of the critical-line to sigma-line second moment over [T, T^1].

    Compare against ln T / zeta(2 sigma).
    """
    if sigma < 0.51:
        raise DomainError("quotient_zeta requires sigma >= 1/2 + 0.01")
    if T < 100.0:
        raise DomainError("quotient_zeta requires T >= 100")
    return _crit_window(T, config) / _sigma_window(sigma, T, config)


def quotient_s1(l: int, T: float, config: PrecisionConfig = DEFAULT_CONFIG) -> float:
    """Ratio of the critical-line second moment to the |S1|^{2l} moment
    over [T, T^1].  Compare against ln T / cbar(l)."""
    if l < 1:
        raise DomainError("l must be >= 1")
    if T < 100.0:
        raise DomainError("quotient_s1 requires T >= 100")
    return _crit_window(T, config) / _s1_window(l, T, config)


def functional_approximant(
    kind: str,
    x: float,
    tau: float,
    sigma: Optional[float] = None,
    l: Optional[int] = None,
    cbar: Optional[CbarEstimate] = None,
    config: PrecisionConfig = DEFAULT_CONFIG,
) -> FunctionalApproximant:
    """Finite-tau value of the kind A/B/C functional at target x.

    The implied window base is T = K * (x * tau); tau must be large
    enough that T >= 100.
    """
    if not (x > 0.0 and math.isfinite(x)):
        raise DomainError("x must be positive and finite")
    if not (tau > 0.0 and math.isfinite(tau)):
        raise DomainError("tau must be positive and finite")
    K = substitution_constant(kind, sigma=sigma, cbar=cbar)
    T = K * (x * tau)
    if T < MIN_IMPLIED_T:
        raise DomainError(f"implied T = {T:.3g} < {MIN_IMPLIED_T}; increase tau")
    U = reverse_iterate(T, config)
    den = _crit_window(T, config)
    if kind in ("A", "C"):
        if sigma is None:
            raise DomainError(f"kind {kind} requires sigma")
        num = _sigma_window(sigma, T, config)
        param = float(sigma)
    else:
        if l is None:
            raise DomainError("kind B requires l")
        if cbar is None:
            raise CacheMissError("kind B requires a cached CbarEstimate")
        if l != cbar.l:
            raise DomainError("cbar estimate was fitted for a different l")
        num = _s1_window(l, T, config)
        param = float(l)
    s: SumResult = (
        fourth_power_sum(T, 2.0 * T, config)
        if kind == "C"
        else titchmarsh_sum(T, 2.0 * T, config)
    )
    value = (num / den) ** 5 * s.value / tau
    return FunctionalApproximant(
        kind=kind,
        x=float(x),
        param=param,
        tau=float(tau),
        T=float(T),
        T1=float(U),
        value=float(value),
        target=float(x),
        rel_err=abs(value / x - 1.0),
        cbar_key=cbar.cache_key if (kind == "B" and cbar is not None) else None,
    )


def chain_compare(
    x: float,
    sigma: float,
    l: int,
    tau: float,
    cbar: CbarEstimate,
    config: PrecisionConfig = DEFAULT_CONFIG,
) -> ChainReport:
    """Evaluate all three functionals at the same x and implied height.

    tau applies to kind A; kinds B and C get the tau that puts their
    window base at the same implied T, which is what makes finite-tau
    values comparable (a shared tau would scatter the three windows over
    wildly different heights).  PASS when every pairwise deviation is
    within the sum of the measured rel_err bands.
    """
    kA = substitution_constant("A", sigma=sigma)
    T_ref = kA * (x * tau)
    if T_ref < MIN_IMPLIED_T:
        raise DomainError(f"implied T = {T_ref:.3g} < {MIN_IMPLIED_T}; increase tau")
    out = {}
    out["A"] = functional_approximant("A", x, tau, sigma=sigma, config=config)
    tau_b = T_ref / (substitution_constant("B", cbar=cbar) * x)
    out["B"] = functional_approximant("B", x, tau_b, l=l, cbar=cbar, config=config)
    tau_c = T_ref / (substitution_constant("C", sigma=sigma) * x)
    out["C"] = functional_approximant("C", x, tau_c, sigma=sigma, config=config)
    values = {k: v.value for k, v in out.items()}
    rel = {k: v.rel_err for k, v in out.items()}
    dev = {}
    ok = True
    for a, b in (("A", "B"), ("A", "C"), ("B", "C")):
        d = abs(values[a] - values[b])
        dev[f"{a}-{b}"] = d
        if d > (rel[a] + rel[b]) * x + 1e-12:
            ok = False
    return ChainReport(
        x=float(x),
        sigma=float(sigma),
        l=int(l),
        implied_T=float(T_ref),
        values=values,
        rel_errs=rel,
        pairwise_dev=dev,
        passed=ok,
    )
