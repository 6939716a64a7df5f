"""The argument of zeta on the critical line: S(t), zero counting, S1(t).

S(t) follows the classical convention: continuous variation of
arg zeta along 2 -> 2+it -> 1/2+it starting from arg zeta(2) = 0.  The
machine check is the Riemann-von Mangoldt branch identity
theta(t)/pi + 1 + S(t) = N(t), whose distance from the nearest integer
is reported as the branch residual.

S1(t) = (1/pi) * integral_0^t arg zeta(1/2+iu) du is evaluated through
the staircase structure of S: between consecutive zeros S(u) equals
N - 1 - theta(u)/pi with N constant, so the integral reduces to zero
ordinates plus an antiderivative of theta.  The quadrature grid is
thereby adapted to every jump of the integrand.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
import numpy as np

from .config import (
    AmbiguousBranchError,
    DEFAULT_CONFIG,
    DomainError,
    PrecisionConfig,
    TrackingError,
)
from .quad import gauss_panels
from .zeta import (
    RS_CROSSOVER,
    TWO_PI,
    _zeta_em_block,
    hardy_z_many,
    theta,
)


@dataclass(frozen=True)
class ArgTrace:
    """S(t) together with the zero count and integrality residual."""

    t: float
    s_value: float
    zero_count: int
    branch_residual: float


_MAX_SPLIT_DEPTH = 26
_ARG_STEP_LIMIT = 1.2  # radians per accepted tracking increment


def _zeta_at(sigma: float, t: float, config: PrecisionConfig) -> complex:
    """Polyline node value; the critical-line endpoint comes from Z."""
    if sigma == 0.5 and t >= RS_CROSSOVER:
        z = float(hardy_z_many(np.array([t]), config)[0])
        return z * complex(np.exp(-1j * theta(t)))
    return complex(_zeta_em_block(np.array([sigma]), np.array([t]), config)[0])


def s_of_t(t: float, config: PrecisionConfig = DEFAULT_CONFIG) -> ArgTrace:
    """S(t) by adaptive branch tracking, with N(t) and the residual.

    Rejects t numerically at a zero ordinate (the branch jump there is
    convention-dependent).
    """
    t = float(t)
    if not (math.isfinite(t) and t >= 0.0):
        raise DomainError("s_of_t requires finite t >= 0")
    if t == 0.0:
        # Degenerate polyline; fixed by convention.
        return ArgTrace(t=0.0, s_value=0.0, zero_count=0, branch_residual=0.0)

    # Vertical leg: |zeta(2+it) - 1| <= zeta(2) - 1 < 1 keeps the value in
    # the right half-plane, so the principal argument is already the
    # continuous branch.
    v = _zeta_at(2.0, t, config)
    total = math.atan2(v.imag, v.real)

    endpoint = _zeta_at(0.5, t, config)
    if abs(endpoint) < 1e-6:
        raise AmbiguousBranchError(f"t={t} is numerically at a zero ordinate")

    # Horizontal leg: sigma from 2 down to 1/2, initial steps bounded by the
    # quadrature step cap, each increment a principal-log of a ratio.
    n_steps = max(2, int(math.ceil(1.5 / config.quad_step_cap)))
    sigmas = np.linspace(2.0, 0.5, n_steps + 1)

    def increment(s1: float, s2: float, v1: complex, v2: complex, depth: int) -> float:
        d = np.angle(v2 / v1)
        if abs(d) < _ARG_STEP_LIMIT:
            return float(d)
        if depth >= _MAX_SPLIT_DEPTH:
            if min(abs(v1), abs(v2)) < 1e-4:
                raise AmbiguousBranchError(
                    f"t={t} is too close to a zero ordinate for branch tracking"
                )
            raise TrackingError(
                f"argument varies too fast near sigma={s1:.6f}..{s2:.6f}, t={t}"
            )
        sm = 0.5 * (s1 + s2)
        vm = _zeta_at(sm, t, config)
        return increment(s1, sm, v1, vm, depth + 1) + increment(sm, s2, vm, v2, depth + 1)

    v_prev = v
    for j in range(1, len(sigmas)):
        v_next = endpoint if j == len(sigmas) - 1 else _zeta_at(float(sigmas[j]), t, config)
        total += increment(float(sigmas[j - 1]), float(sigmas[j]), v_prev, v_next, 0)
        v_prev = v_next

    s_val = total / math.pi
    x = theta(t) / math.pi + 1.0 + s_val
    n = int(round(x))
    resid = abs(x - n)
    if resid > 0.25:
        raise TrackingError(f"branch integrality residual {resid:.3f} at t={t}")
    return ArgTrace(t=t, s_value=s_val, zero_count=max(n, 0), branch_residual=resid)


# ----------------------------------------------------------------------
# Zeros of Z on the critical line
# ----------------------------------------------------------------------

class ZeroCache:
    """Ordinates of the zeros of Z up to a growing ceiling.

    Zeros are located by sign changes on a graded grid (a fixed fraction
    of the local mean gap), a dip-refinement pass that hunts for
    close pairs hiding inside same-sign cells, and vectorized bisection.
    The final count is cross-checked against the branch-tracking count
    N(t); a mismatch raises rather than self-corrects, keeping the two
    channels independent.
    """

    FIRST_ZERO_FLOOR = 10.0

    def __init__(self, config: PrecisionConfig = DEFAULT_CONFIG):
        self.config = config
        self.t_max = 0.0
        self.zeros = np.empty(0)
        self._lock = threading.Lock()

    def ensure(self, t_max: float) -> np.ndarray:
        with self._lock:
            if t_max > self.t_max:
                target = max(t_max * 1.02 + 5.0, 100.0)
                self.zeros = self._scan(target)
                self.t_max = target
            return self.zeros

    def count_below(self, t: float) -> int:
        self.ensure(t)
        return int(np.searchsorted(self.zeros, t))

    # -- internals ------------------------------------------------------

    def _grid(self, t_hi: float, refine: float = 1.0) -> np.ndarray:
        blocks = []
        a = self.FIRST_ZERO_FLOOR
        while a < t_hi:
            b = min(t_hi, a * 1.3 + 5.0)
            gap = TWO_PI / math.log(max(a, 20.0) / TWO_PI)
            h = max(min(0.25, 0.15 * gap) / refine, 1e-4)
            n = int(math.ceil((b - a) / h))
            blocks.append(np.linspace(a, b, n + 1)[:-1])
            a = b
        blocks.append(np.array([t_hi]))
        return np.concatenate(blocks)

    def _scan(self, t_hi: float) -> np.ndarray:
        grid = self._grid(t_hi)
        z = hardy_z_many(grid, self.config)
        sgn = np.sign(z)
        flips = np.nonzero(sgn[:-1] * sgn[1:] < 0)[0]
        a = grid[flips].tolist()
        b = grid[flips + 1].tolist()
        fa = z[flips].tolist()

        # dip refinement: a same-sign cell whose middle sample is a local
        # minimum of |Z| below the threshold may hide a close pair
        flip_set = set(flips.tolist())
        absz = np.abs(z)
        cand = np.nonzero(
            (absz[1:-1] < 0.08)
            & (absz[1:-1] <= absz[:-2])
            & (absz[1:-1] <= absz[2:])
        )[0] + 1
        for i in cand:
            if i in flip_set or (i - 1) in flip_set:
                continue
            sub = np.linspace(grid[i - 1], grid[i + 1], 41)
            zs = hardy_z_many(sub, self.config)
            ss = np.sign(zs)
            for j in np.nonzero(ss[:-1] * ss[1:] < 0)[0]:
                a.append(float(sub[j]))
                b.append(float(sub[j + 1]))
                fa.append(float(zs[j]))

        av = np.array(a)
        bv = np.array(b)
        fav = np.array(fa)
        for _ in range(52):
            m = 0.5 * (av + bv)
            fm = hardy_z_many(m, self.config)
            left = np.sign(fm) == np.sign(fav)
            av = np.where(left, m, av)
            fav = np.where(left, fm, fav)
            bv = np.where(left, bv, m)
        zeros = np.sort(0.5 * (av + bv))

        # independent count validation at a checkpoint clear of any zero
        check = self._checkpoint_clear_of(zeros, t_hi)
        n_expected = s_of_t(check, self.config).zero_count
        n_found = int(np.searchsorted(zeros, check))
        if n_found != n_expected:
            raise TrackingError(
                f"zero scan found {n_found} zeros below {check:.3f}, "
                f"branch tracking expects {n_expected}"
            )
        return zeros

    @staticmethod
    def _checkpoint_clear_of(zeros: np.ndarray, t_hi: float) -> float:
        check = t_hi - 0.25
        if len(zeros):
            near = zeros[np.abs(zeros - check) < 0.05]
            if len(near):
                check = float(near[0]) - 0.4
        return check


class _S1Tables:
    """One immutable generation of the evaluator's lookup tables."""

    __slots__ = ("t_max", "zeros", "zero_prefix", "edges", "theta_prefix")

    def __init__(self, t_max, zeros, zero_prefix, edges, theta_prefix):
        self.t_max = t_max
        self.zeros = zeros
        self.zero_prefix = zero_prefix
        self.edges = edges
        self.theta_prefix = theta_prefix


class S1Evaluator:
    """S1(t) from the zero staircase plus an antiderivative of theta.

    S1(t) = sum_{gamma <= t} (t - gamma) - t - (1/pi) int_0^t theta.

    Tables are rebuilt as whole immutable generations and swapped in a
    single assignment, so concurrent readers never see a mixed state.
    """

    _THETA_PANEL = 2.0
    _THETA_ORDER = 16

    def __init__(self, config: PrecisionConfig = DEFAULT_CONFIG):
        self.config = config
        self.zeros_cache = ZeroCache(config)
        self._tables = _S1Tables(0.0, np.empty(0), np.zeros(1), np.zeros(1), np.zeros(1))
        self._lock = threading.Lock()

    def ensure(self, t_max: float) -> _S1Tables:
        tables = self._tables
        if t_max <= tables.t_max:
            return tables
        with self._lock:
            tables = self._tables
            if t_max <= tables.t_max:
                return tables
            zeros = self.zeros_cache.ensure(t_max)
            hi = self.zeros_cache.t_max
            n = int(math.ceil(hi / self._THETA_PANEL))
            edges = np.linspace(0.0, hi, n + 1)
            nodes, weights = gauss_panels(0.0, hi, width=hi / n, order=self._THETA_ORDER)
            per = (theta(nodes) * weights).reshape(n, self._THETA_ORDER).sum(axis=1)
            tables = _S1Tables(
                t_max=hi,
                zeros=zeros,
                zero_prefix=np.concatenate([[0.0], np.cumsum(zeros)]),
                edges=edges,
                theta_prefix=np.concatenate([[0.0], np.cumsum(per)]),
            )
            self._tables = tables
            return tables

    def theta_integral(self, t) -> np.ndarray:
        """integral_0^t theta(u) du for array t within the prepared range."""
        t = np.atleast_1d(np.asarray(t, dtype=float))
        return self._theta_integral(self.ensure(float(t.max())), t)

    def _theta_integral(self, tab: _S1Tables, t: np.ndarray) -> np.ndarray:
        i = np.clip(np.searchsorted(tab.edges, t, side="right") - 1, 0, len(tab.edges) - 2)
        out = tab.theta_prefix[i].copy()
        from numpy.polynomial.legendre import leggauss

        x, w = leggauss(self._THETA_ORDER)
        a = tab.edges[i]
        mid = 0.5 * (a + t)
        half = 0.5 * (t - a)
        nodes = mid[:, None] + half[:, None] * x[None, :]
        out += (theta(nodes.ravel()).reshape(nodes.shape) * w[None, :]).sum(axis=1) * half
        return out

    def value_many(self, t) -> np.ndarray:
        t = np.atleast_1d(np.asarray(t, dtype=float))
        if np.any(t < 0):
            raise DomainError("S1 requires t >= 0")
        tab = self.ensure(float(t.max()) if len(t) else 0.0)
        k = np.searchsorted(tab.zeros, t)
        zsum = t * k - tab.zero_prefix[k]
        return zsum - t - self._theta_integral(tab, t) / math.pi

    def value(self, t: float) -> float:
        return float(self.value_many(np.array([float(t)]))[0])

    def s_value_many(self, t) -> np.ndarray:
        """S(u) = N(u) - 1 - theta(u)/pi from the zero staircase."""
        t = np.atleast_1d(np.asarray(t, dtype=float))
        tab = self.ensure(float(t.max()) if len(t) else 0.0)
        k = np.searchsorted(tab.zeros, t)
        return k - 1.0 - theta(t) / math.pi

    def zeros_in(self, a: float, b: float) -> np.ndarray:
        tab = self.ensure(b)
        lo = np.searchsorted(tab.zeros, a)
        hi = np.searchsorted(tab.zeros, b)
        return tab.zeros[lo:hi]


_EVALUATORS: dict[PrecisionConfig, S1Evaluator] = {}
_EVAL_LOCK = threading.Lock()


def shared_s1_evaluator(config: PrecisionConfig = DEFAULT_CONFIG) -> S1Evaluator:
    """Synchronized per-config evaluator cache (results are deterministic,
    so sharing across workers is safe)."""
    with _EVAL_LOCK:
        ev = _EVALUATORS.get(config)
        if ev is None:
            ev = S1Evaluator(config)
            _EVALUATORS[config] = ev
        return ev


def s1_of_t(t: float, config: PrecisionConfig = DEFAULT_CONFIG) -> float:
    """S1(t), the antiderivative of S, via the shared evaluator."""
    t = float(t)
    if not (math.isfinite(t) and t >= 0.0):
        raise DomainError("s1_of_t requires finite t >= 0")
    if t == 0.0:
        return 0.0
    return shared_s1_evaluator(config).value(t)
