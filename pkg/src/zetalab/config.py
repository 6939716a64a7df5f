"""Precision knobs and the error taxonomy shared by all evaluators."""

from __future__ import annotations

from dataclasses import dataclass, field, asdict
from typing import Any, Dict
import json
import math


@dataclass(frozen=True)
class PrecisionConfig:
    """Numerical policy for every evaluator in the package.

    abs_tol governs root residuals and structural consistency checks
    (Gram defining equations, ladder defining equations, branch
    integrality).  eval_tol is the acceptance threshold for the
    a-posteriori accuracy bound of a single zeta/Z evaluation; a bound
    above it raises PrecisionError rather than returning a silently
    degraded value.
    """

    abs_tol: float = 1e-10
    quad_step_cap: float = 0.1
    max_newton_iters: int = 60
    # Euler-Maclaurin cutoff rule: N(t) = ceil(|t|/2pi) + margin(t) with
    # margin(t) = max(em_margin_base, ceil(em_margin_scale * sqrt(|t|))).
    # The sqrt term keeps the attainable truncation floor near 1e-11 at
    # desk heights; a flat margin cannot (its floor grows like 1e-3 by
    # t ~ 5e4).
    em_margin_base: int = 50
    em_margin_scale: float = 2.0
    em_max_bernoulli: int = 500
    eval_tol: float = 1e-5
    # Off-critical-line integrands vary on the O(1) scale set by zeta'ated
    # prime sums, not the zero-gap scale; their panels may be this factor
    # wider than quad_step_cap.
    offline_panel_factor: float = 5.0

    def __post_init__(self) -> None:
        if not (self.abs_tol > 0 and math.isfinite(self.abs_tol)):
            raise DomainError("abs_tol must be positive and finite")
        if not (self.quad_step_cap > 0 and math.isfinite(self.quad_step_cap)):
            raise DomainError("quad_step_cap must be positive and finite")
        if self.max_newton_iters < 1:
            raise DomainError("max_newton_iters must be >= 1")
        if self.em_margin_base < 1 or self.em_margin_scale < 0:
            raise DomainError("invalid Euler-Maclaurin margin policy")

    def em_cutoff(self, t: float) -> int:
        """Euler-Maclaurin main-sum cutoff N for imaginary part t."""
        t = abs(float(t))
        margin = max(self.em_margin_base, int(math.ceil(self.em_margin_scale * math.sqrt(t))))
        return int(math.ceil(t / (2.0 * math.pi))) + margin

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: Dict[str, Any]) -> "PrecisionConfig":
        known = {f for f in cls.__dataclass_fields__}
        bad = set(d) - known
        if bad:
            raise DomainError(f"unknown PrecisionConfig fields: {sorted(bad)}")
        return cls(**d)

    @classmethod
    def from_json(cls, path: str) -> "PrecisionConfig":
        with open(path, "r", encoding="utf-8") as f:
            return cls.from_dict(json.load(f))


DEFAULT_CONFIG = PrecisionConfig()


class ZetaLabError(Exception):
    """Base class for every error raised by this package."""


class DomainError(ZetaLabError, ValueError):
    """Input outside an operation's stated domain."""


class PoleError(DomainError):
    """Evaluation requested at the pole s = 1."""


class PrecisionError(ZetaLabError):
    """Requested accuracy is unattainable; carries the achievable bound."""

    def __init__(self, message: str, achievable: float | None = None):
        super().__init__(message)
        self.achievable = achievable


class RootError(ZetaLabError):
    """A root finder failed to converge or to bracket."""


class TrackingError(ZetaLabError):
    """Branch tracking rejected a step (argument variation too fast)."""


class AmbiguousBranchError(TrackingError):
    """S(t) requested at (or numerically at) a zero ordinate."""


class CacheMissError(ZetaLabError):
    """A required cached constant (c-bar estimate) is unavailable."""
