"""Evaluators on and off the critical line: theta, zeta, Hardy Z.

Strategy split (fixed for reproducibility):
  * theta(t) exactly via Im log-Gamma(1/4 + it/2) - (t/2) ln pi.
  * Z(t) by the Riemann-Siegel main sum with correction terms C0..C3
    for t >= RS_CROSSOVER, by Euler-Maclaurin below it.
  * zeta(sigma+it) by Euler-Maclaurin off the critical line; on the
    critical line above the crossover it is reassembled from Z so that
    |zeta(1/2+it)| == |Z(t)| holds by construction.

Vectorized kernels are deterministic functions of their input array
(values and shape).  Every operation in this package assembles those
arrays from its own parameters alone, so op results are bit-reproducible
across runs and across worker counts; worker parallelism only ever
distributes whole operations.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.special import digamma, loggamma, poch
from scipy.special import zeta as real_zeta

from .config import (
    DEFAULT_CONFIG,
    DomainError,
    PoleError,
    PrecisionConfig,
    PrecisionError,
)

TWO_PI = 2.0 * math.pi
LN_PI = math.log(math.pi)
EULER_GAMMA = 0.5772156649015329

# Crossover between Euler-Maclaurin and Riemann-Siegel for Z (both are
# accurate there; one fixed value keeps outputs reproducible).
RS_CROSSOVER = 50.0

_BLOCK = 4096  # fixed vector-kernel block size; part of the output contract


def _as_height_array(t) -> np.ndarray:
    arr = np.asarray(t, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise DomainError("height t must be finite")
    if np.any(arr < 0.0):
        raise DomainError("height t must be >= 0")
    return arr


def theta(t):
    """Riemann-Siegel theta via the exact log-Gamma form (not the asymptotic).

    Accepts a scalar or array; scalar in, scalar out.
    """
    arr = _as_height_array(t)
    val = np.imag(loggamma(0.25 + 0.5j * arr)) - 0.5 * arr * LN_PI
    return float(val) if np.isscalar(t) or np.ndim(t) == 0 else val


def theta_deriv(t):
    """d theta/dt, exact up to round-off.  Requires t > 2 pi.

    Below 2 pi the derivative's main term (1/2) ln(t/2pi) is negative and
    callers must bracket instead of using Newton steps.
    """
    arr = _as_height_array(t)
    if np.any(arr <= TWO_PI):
        raise DomainError("theta_deriv requires t > 2*pi")
    val = 0.5 * np.real(digamma(0.25 + 0.5j * arr)) - 0.5 * LN_PI
    return float(val) if np.isscalar(t) or np.ndim(t) == 0 else val


def theta_antiderivative(t_lo: float, t_hi: float, order: int = 16) -> float:
    """integral of theta over [t_lo, t_hi] by Gauss-Legendre panels."""
    from .quad import gauss_panels

    nodes, weights = gauss_panels(t_lo, t_hi, width=2.0, order=order)
    return float(np.sum(theta(nodes) * weights))


# ----------------------------------------------------------------------
# Psi(p) = cos(2pi(p^2 - p - 1/16)) / cos(2pi p) and its derivatives.
#
# Psi is entire (the numerator vanishes at every zero of the
# denominator), so a single Taylor table about p = 1/2 covers [0, 1].
# Coefficients come from a trapezoidal Cauchy integral on |w - 1/2| = 1,
# which is exponentially accurate for entire integrands.
# ----------------------------------------------------------------------

_PSI_DEG = 64
_PSI_CENTER = 0.5


def _psi_taylor_table() -> np.ndarray:
    nodes = 512
    k = np.arange(nodes)
    w = _PSI_CENTER + np.exp(2j * np.pi * k / nodes)
    vals = np.cos(TWO_PI * (w * w - w - 0.0625)) / np.cos(TWO_PI * w)
    n = np.arange(_PSI_DEG + 1)
    F = np.exp(-2j * np.pi * np.outer(n, k) / nodes)
    return ((F @ vals) / nodes).real


_PSI_A = _psi_taylor_table()


def psi_deriv(p, k: int):
    """k-th derivative of Psi at p (vectorized), from the Taylor table."""
    x = np.asarray(p, dtype=float) - _PSI_CENTER
    n = np.arange(k, _PSI_DEG + 1)
    coeff = _PSI_A[k:] * poch(n - k + 1, k)
    v = np.zeros_like(x)
    for c in coeff[::-1]:
        v = v * x + c
    return v


_PI2 = math.pi ** 2
_PI4 = math.pi ** 4
_PI6 = math.pi ** 6


def _rs_corrections(p: np.ndarray, tau: np.ndarray) -> np.ndarray:
    """C0 + C1/tau + C2/tau^2 + C3/tau^3 with tau = sqrt(t/2pi)."""
    c0 = psi_deriv(p, 0)
    c1 = -psi_deriv(p, 3) / (96.0 * _PI2)
    c2 = psi_deriv(p, 2) / (64.0 * _PI2) + psi_deriv(p, 6) / (18432.0 * _PI4)
    c3 = (
        -psi_deriv(p, 1) / (64.0 * _PI2)
        - psi_deriv(p, 5) / (3840.0 * _PI4)
        - psi_deriv(p, 9) / (5308416.0 * _PI6)
    )
    return c0 + (c1 + (c2 + c3 / tau) / tau) / tau


def rs_error_bound(t) -> np.ndarray:
    """A-posteriori bound for the C0..C3 Riemann-Siegel evaluation.

    Empirical envelope calibrated against an arbitrary-precision
    reference over [50, 1e6]: truncation tracks 0.011 t^{-9/4} (tripled
    here for safety) and the round-off floor tracks the main-sum phase
    magnitude t ln(t/2pi) at a few ulp.
    """
    t = np.asarray(t, dtype=float)
    return 0.033 * t ** -2.25 + 2e-15 * t * np.log(t / TWO_PI + 2.0)


def _hardy_z_rs_block(ts: np.ndarray) -> np.ndarray:
    """RS main sum + C0..C3 for one block, all t >= RS_CROSSOVER."""
    tau = np.sqrt(ts / TWO_PI)
    m = np.floor(tau).astype(np.int64)
    p = tau - m
    th = np.imag(loggamma(0.25 + 0.5j * ts)) - 0.5 * ts * LN_PI
    mmax = int(m.max())
    n = np.arange(1, mmax + 1, dtype=float)
    logn = np.log(n)
    rsq = 1.0 / np.sqrt(n)
    # masked main sum; row reduction order is fixed by the block layout
    phase = th[:, None] - ts[:, None] * logn[None, :]
    terms = np.cos(phase) * rsq[None, :]
    terms[n[None, :] > m[:, None]] = 0.0
    main = 2.0 * np.sum(terms, axis=1)
    corr = _rs_corrections(p, tau)
    sign = np.where(m % 2 == 0, -1.0, 1.0)  # (-1)^(m+1)
    return main + sign * corr / np.sqrt(tau)


def _hardy_z_em_block(ts: np.ndarray, config: PrecisionConfig) -> np.ndarray:
    """Z below the crossover: real part of e^{i theta} zeta_EM(1/2+it)."""
    vals = _zeta_em_block(np.full_like(ts, 0.5), ts, config)
    th = theta(ts)
    return np.real(np.exp(1j * th) * vals)


def hardy_z_many(t, config: PrecisionConfig = DEFAULT_CONFIG) -> np.ndarray:
    """Vectorized Z(t); fixed blocking, t in any order."""
    ts = _as_height_array(np.atleast_1d(np.asarray(t, dtype=float)))
    out = np.empty_like(ts)
    lo = ts < RS_CROSSOVER
    if lo.any():
        idx = np.nonzero(lo)[0]
        for i in range(0, len(idx), _BLOCK):
            blk = idx[i : i + _BLOCK]
            out[blk] = _hardy_z_em_block(ts[blk], config)
    hi = ~lo
    if hi.any():
        idx = np.nonzero(hi)[0]
        for i in range(0, len(idx), _BLOCK):
            blk = idx[i : i + _BLOCK]
            out[blk] = _hardy_z_rs_block(ts[blk])
    return out


def hardy_z(t: float, config: PrecisionConfig = DEFAULT_CONFIG) -> float:
    """Hardy's Z(t) = e^{i theta(t)} zeta(1/2+it), real-valued.

    Raises PrecisionError when the a-posteriori accuracy bound exceeds
    config.eval_tol.
    """
    tf = float(t)
    _as_height_array(tf)
    if tf >= RS_CROSSOVER:
        bound = float(rs_error_bound(tf))
        if bound > config.eval_tol:
            raise PrecisionError(
                f"Z({tf}) attainable only to {bound:.2e} > eval_tol", achievable=bound
            )
    return float(hardy_z_many(np.array([tf]), config)[0])


# ----------------------------------------------------------------------
# Euler-Maclaurin zeta
# ----------------------------------------------------------------------

def _bernoulli_ratio(k: int) -> float:
    """(B_{2k+2}/(2k+2)!) / (B_{2k}/(2k)!) via zeta(2k) values."""
    return -float(real_zeta(2.0 * k + 2.0) / real_zeta(2.0 * k)) / TWO_PI ** 2


def _zeta_em_block(
    sigmas: np.ndarray, ts: np.ndarray, config: PrecisionConfig
) -> np.ndarray:
    """EM for one block of points; cutoff set by the block's largest t."""
    s = sigmas + 1j * ts
    N = config.em_cutoff(float(ts.max()) if len(ts) else 0.0)
    n = np.arange(1, N, dtype=float)
    logn = np.log(n)
    # main sum in chunks of the n-axis to cap memory
    out = np.zeros(len(s), dtype=complex)
    step = max(1, int(4e6) // max(len(s), 1))
    for j in range(0, len(n), step):
        out += np.exp(-np.multiply.outer(s, logn[j : j + step])).sum(axis=1)
    Nf = float(N)
    out += Nf ** (1.0 - s) / (s - 1.0) + 0.5 * Nf ** (-s)
    # Bernoulli tail, shared k-loop, stops at the series' smallest term
    term = (1.0 / 12.0) * s * Nf ** (-s - 1.0)
    k = 1
    while True:
        out += term
        nxt = term * (_bernoulli_ratio(k) * ((s + (2 * k - 1)) * (s + 2 * k))) / (Nf * Nf)
        amax = float(np.abs(nxt).max())
        if amax < 1e-17 or amax >= float(np.abs(term).max()) or k >= config.em_max_bernoulli:
            break
        term = nxt
        k += 1
    return out


def em_error_bound(sigma: float, t: float, config: PrecisionConfig = DEFAULT_CONFIG) -> float:
    """A-posteriori bound for one EM evaluation: first omitted Bernoulli
    term times the standard |s+2K+1|/(sigma+2K+1) factor, plus a phase
    round-off floor eps*t*ln N."""
    t = abs(float(t))
    s = complex(sigma, t)
    N = float(config.em_cutoff(t))
    term = abs((1.0 / 12.0) * s * N ** (-sigma - 1.0))
    k = 1
    while k < config.em_max_bernoulli:
        nxt = term * abs(_bernoulli_ratio(k)) * abs(s + (2 * k - 1)) * abs(s + 2 * k) / (N * N)
        if nxt >= term or nxt < 1e-18:
            term = nxt
            break
        term = nxt
        k += 1
    safety = abs(s + (2 * k + 1)) / (sigma + 2 * k + 1)
    roundoff = 4e-16 * (1.0 + t) * math.log(N + 2.0)
    return term * safety + roundoff


def zeta(s, config: PrecisionConfig = DEFAULT_CONFIG) -> complex:
    """zeta(sigma+it) for sigma > 0, s != 1, to the accuracy of the
    Euler-Maclaurin policy in `config`.

    On the critical line above the Z crossover the value is reassembled
    from the Riemann-Siegel Z, which callers should prefer anyway.
    Negative t is served by conjugation symmetry.
    """
    s = complex(s)
    if s == 1:
        raise PoleError("zeta has a pole at s = 1")
    if not (math.isfinite(s.real) and math.isfinite(s.imag)):
        raise DomainError("s must be finite")
    if s.real <= 0.0:
        raise DomainError("evaluations require sigma > 0")
    if s.imag < 0.0:
        return complex(np.conj(zeta(complex(s.real, -s.imag), config)))
    bound = em_error_bound(s.real, s.imag, config)
    if s.real == 0.5 and s.imag >= RS_CROSSOVER:
        z = hardy_z(s.imag, config)
        return complex(z * np.exp(-1j * theta(s.imag)))
    if bound > config.eval_tol:
        raise PrecisionError(
            f"zeta({s}) attainable only to {bound:.2e} > eval_tol", achievable=bound
        )
    return complex(
        _zeta_em_block(np.array([s.real]), np.array([s.imag]), config)[0]
    )


def zeta_abs2_line(
    sigma: float, t, config: PrecisionConfig = DEFAULT_CONFIG
) -> np.ndarray:
    """|zeta(sigma+it)|^2 for an array of heights on one sigma-line.

    The quadrature workhorse: shares the n-grid across each block.
    sigma == 0.5 delegates to Z via |zeta| = |Z|.
    """
    ts = _as_height_array(np.atleast_1d(np.asarray(t, dtype=float)))
    if sigma == 0.5:
        z = hardy_z_many(ts, config)
        return z * z
    if sigma <= 0.0:
        raise DomainError("sigma-line evaluations require sigma > 0")
    out = np.empty(len(ts))
    for i in range(0, len(ts), _BLOCK):
        blk = slice(i, min(i + _BLOCK, len(ts)))
        vals = _zeta_em_block(np.full(blk.stop - blk.start, float(sigma)), ts[blk], config)
        out[blk] = np.abs(vals) ** 2
    return out
