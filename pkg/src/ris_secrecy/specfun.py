"""Special-function kernel used by the closed-form secrecy engine.

Everything downstream reduces to three primitives: the integer-order
modified Bessel function of the second kind, log-gamma, and Gauss-Laguerre
quadrature tables.  On top of those this module provides the survival
function, CDF and density of the normalized cascaded-channel power (the
squared magnitude of a coherent sum of products of independent complex
Gaussians), evaluated in log space so that large quadrature arguments
underflow gracefully instead of turning into inf*0.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import special as sp_special
from scipy.linalg import eigh_tridiagonal

__all__ = [
    "QuadratureTable",
    "UnderflowWarning",
    "bessel_k",
    "log_bessel_k",
    "gauss_laguerre",
    "kdist_cdf",
    "kdist_logsf",
    "kdist_pdf",
    "kdist_sf",
    "ln_gamma",
]

_EULER_GAMMA = 0.5772156649015329
# exp() underflows to 0 below this; used to spot lost Bessel tails
_LOG_TINY = math.log(5e-324)


class UnderflowWarning(RuntimeWarning):
    """Result decayed below the smallest representable float and was returned as 0."""


def ln_gamma(n):
    """Natural log of the gamma function; ln_gamma(n) = ln((n-1)!) for integer n.

    Thin wrapper kept in the module surface so callers never mix up
    gamma-vs-factorial offsets.  Accepts scalars or arrays, requires n > 0.
    """
    arr = np.asarray(n, dtype=float)
    if np.any(~np.isfinite(arr)) or np.any(arr <= 0.0):
        raise ValueError("ln_gamma requires finite n > 0")
    out = sp_special.gammaln(arr)
    return float(out) if np.isscalar(n) or arr.ndim == 0 else out


def _check_bessel_domain(x):
    arr = np.asarray(x, dtype=float)
    if np.any(~np.isfinite(arr)) or np.any(arr <= 0.0):
        raise ValueError("modified Bessel K requires finite x > 0")
    return arr


def log_bessel_k(q: int, x) -> np.ndarray | float:
    """ln K_q(x) for integer order q >= 0, stable for arguments up to ~1e300.

    Uses the exponentially scaled kernel, ln K_q(x) = ln(kve(q, x)) - x, and
    switches to the leading small-argument form when the scaled kernel would
    overflow (large q together with tiny x) or to the large-argument
    asymptotic expansion where the scaled kernel reports NaN (x beyond about
    1.07e9, where the expansion is already exact to well under double
    precision for any order this package uses).
    """
    if q < 0 or q != int(q):
        raise ValueError("order must be a nonnegative integer")
    arr = _check_bessel_domain(x)
    scalar = np.isscalar(x) or arr.ndim == 0
    arr = np.atleast_1d(arr)

    with np.errstate(over="ignore"):
        kve = sp_special.kve(q, arr)
    out = np.log(kve) - arr

    # Two ways the scaled kernel fails: kve ~ Gamma(q)/2 * (2/x)^q overflows
    # for big q at tiny x, and the backing Amos routine returns NaN for
    # x beyond ~2^30.  K_q itself is representable in log form in both
    # regimes, so patch each analytically.
    bad = ~np.isfinite(out)
    if np.any(bad):
        xs = arr[bad]
        patched = np.empty_like(xs)
        huge = np.isnan(kve[bad])
        if np.any(huge):
            # relative truncation error of the two-term tail is < 1e-17 at
            # the 2^30 takeover point even for q = 64
            xh = xs[huge]
            mu = 4.0 * q * q
            a1 = (mu - 1.0) / 8.0
            a2 = a1 * (mu - 9.0) / 16.0
            patched[huge] = (
                0.5 * np.log(np.pi / (2.0 * xh)) - xh + np.log1p(a1 / xh + a2 / (xh * xh))
            )
        tiny = ~huge
        if np.any(tiny):
            xt = xs[tiny]
            if q == 0:
                patched[tiny] = np.log(-np.log(xt / 2.0) - _EULER_GAMMA)
            else:
                lead = math.lgamma(q) - math.log(2.0) + q * np.log(2.0 / xt)
                if q >= 2:
                    # next ascending-series term; only a refinement, so skip
                    # it where the series is not converging
                    corr = (xt * xt) / (4.0 * (q - 1.0))
                    ok = corr < 0.5
                    lead[ok] += np.log1p(-corr[ok])
                patched[tiny] = lead
        out[bad] = patched
    return float(out[0]) if scalar else out


def bessel_k(q: int, x) -> np.ndarray | float:
    """Modified Bessel function of the second kind K_q(x), integer q >= 0.

    Parameters
    ----------
    q : int
        Order, q >= 0.
    x : float or array_like
        Argument(s), finite and > 0.

    Returns
    -------
    float or ndarray
        K_q(x).  For x deep in the exponential tail (beyond roughly 745)
        the true value is below the smallest double; 0.0 is returned and an
        ``UnderflowWarning`` is emitted rather than an error.

    Notes
    -----
    Evaluated as kve(q, x) * exp(-x); the scaled kernel keeps full relative
    accuracy (measured <= 1e-14 against an arbitrary-precision oracle on
    q <= 30, x in [1e-8, 700]) all the way to the underflow edge, where the
    unscaled routine loses the last few orders of magnitude.
    """
    logk = log_bessel_k(q, x)
    arr = np.atleast_1d(np.asarray(logk, dtype=float))
    with np.errstate(over="ignore"):
        out = np.where(arr > 709.0, np.inf, np.exp(np.minimum(arr, 709.78)))
    if np.any((out == 0.0)):
        warnings.warn(
            "bessel_k underflowed to 0 for some arguments", UnderflowWarning, stacklevel=2
        )
    scalar = np.isscalar(logk)
    return float(out[0]) if scalar else out.reshape(np.shape(logk))


@dataclass(frozen=True)
class QuadratureTable:
    """Gauss-Laguerre abscissas and weights for integrals against exp(-x).

    Invariants checked at construction: nodes strictly ascending and positive,
    weights nonnegative and finite, sum(w) = 1 within 1e-10 and
    sum(w * x) = 1 within 1e-9 (zeroth and first moments of exp(-x)).
    """

    order: int
    nodes: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        nodes = np.asarray(self.nodes, dtype=float)
        weights = np.asarray(self.weights, dtype=float)
        if nodes.shape != (self.order,) or weights.shape != (self.order,):
            raise ValueError("nodes/weights must both have shape (order,)")
        if nodes[0] <= 0.0 or np.any(np.diff(nodes) <= 0.0):
            raise ValueError("nodes must be strictly ascending and positive")
        if np.any(~np.isfinite(weights)) or np.any(weights < 0.0):
            raise ValueError("weights must be finite and nonnegative")
        if abs(weights.sum() - 1.0) > 1e-10:
            raise ValueError("weights must sum to 1 within 1e-10")
        if abs(float(weights @ nodes) - 1.0) > 1e-9:
            raise ValueError("first moment must equal 1 within 1e-9")
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "weights", weights)


def _laguerre_scaled(order: int, x: np.ndarray):
    """Evaluate (L_order, L'_order) at x with a shared log-scale exponent.

    Returns (l, dl, ex) such that L_order(x) = l * exp(ex) elementwise; the
    rescaling keeps the three-term recurrence finite for order up to 512
    where raw values overflow around order 200.
    """
    lm = np.ones_like(x)
    l = 1.0 - x
    ex = np.zeros_like(x)
    for k in range(1, order):
        lp = ((2.0 * k + 1.0 - x) * l - k * lm) / (k + 1.0)
        lm, l = l, lp
        big = np.abs(l) > 1e140
        if np.any(big):
            scale = np.where(big, np.abs(l), 1.0)
            ex += np.log(scale)
            l = l / scale
            lm = lm / scale
    dl = order * (l - lm) / x
    return l, dl, ex


def gauss_laguerre(order: int) -> QuadratureTable:
    """Build the Gauss-Laguerre table of the given order (1 <= order <= 512).

    Nodes are the eigenvalues of the symmetric tridiagonal Jacobi matrix,
    polished by Newton iteration on the rescaled recurrence (tolerance 1e-14,
    at most 100 sweeps); weights come from w = 1 / (x * L'(x)^2) evaluated in
    log space so the 1e-100-scale tail weights at order 64+ survive.  Beyond
    order ~190 the extreme tail weights drop below the smallest double and
    are returned as exact zeros.
    """
    if not isinstance(order, (int, np.integer)) or order < 1 or order > 512:
        raise ValueError("order must be an integer in [1, 512]")
    order = int(order)
    if order == 1:
        return QuadratureTable(1, np.array([1.0]), np.array([1.0]))

    k = np.arange(order)
    nodes = eigh_tridiagonal(2.0 * k + 1.0, k[1:].astype(float), eigvals_only=True)
    for _ in range(100):
        l, dl, _ = _laguerre_scaled(order, nodes)
        step = l / dl
        nodes = nodes - step
        if np.max(np.abs(step) / nodes) < 1e-14:
            break
    _, dl, ex = _laguerre_scaled(order, nodes)
    log_w = -np.log(nodes) - 2.0 * (np.log(np.abs(dl)) + ex)
    with np.errstate(under="ignore"):
        weights = np.exp(log_w)
    return QuadratureTable(order, nodes, weights)


def _as_float_array(z):
    # +inf is a legitimate saturated argument (sf -> 0, pdf -> 0)
    arr = np.asarray(z, dtype=float)
    if np.any(np.isnan(arr)) or np.any(arr < 0.0):
        raise ValueError("argument must be >= 0 (nan rejected)")
    return arr


def kdist_logsf(q: int, z) -> np.ndarray | float:
    """ln of the cascade-power survival function (2/Gamma(q)) z^{q/2} K_q(2 sqrt z).

    z is the power normalized by the per-hop mean-gain product; q is the
    number of coherently combined elements.  The survival function tends to 1
    as z -> 0+ and to 0 in the exponential tail; both limits are reached
    without overflow by combining the scaled Bessel kernel with a
    small-argument series below z = 1e-12.
    """
    if q < 1 or q != int(q):
        raise ValueError("q must be a positive integer")
    arr = _as_float_array(z)
    scalar = np.isscalar(z) or arr.ndim == 0
    arr = np.atleast_1d(arr).astype(float)
    out = np.empty_like(arr)

    unbounded = np.isinf(arr)
    out[unbounded] = -np.inf
    small = (arr < 1e-12) & ~unbounded
    if np.any(small):
        zs = arr[small]
        if q == 1:
            # x K_1(x) = 1 + z ln z + (2*gamma - 1) z + O(z^2 ln z), x = 2 sqrt z
            with np.errstate(divide="ignore", invalid="ignore"):
                corr = np.where(zs > 0.0, zs * np.log(zs), 0.0)
            out[small] = np.log1p(corr + (2.0 * _EULER_GAMMA - 1.0) * zs)
        else:
            out[small] = np.log1p(-zs / (q - 1.0))
    rest = ~small & ~unbounded
    if np.any(rest):
        zl = arr[rest]
        x = 2.0 * np.sqrt(zl)
        out[rest] = (
            math.log(2.0)
            - math.lgamma(q)
            + (q / 2.0) * np.log(zl)
            + log_bessel_k(q, x)
        )
    out = np.minimum(out, 0.0)
    return float(out[0]) if scalar else out.reshape(np.shape(np.asarray(z)))


def kdist_sf(q: int, z) -> np.ndarray | float:
    """Survival function of the normalized cascade power; see kdist_logsf."""
    logsf = kdist_logsf(q, z)
    with np.errstate(under="ignore"):
        return np.exp(logsf)


def kdist_cdf(q: int, z) -> np.ndarray | float:
    """CDF of the normalized cascade power, 1 - kdist_sf, clamped to [0, 1]."""
    logsf = kdist_logsf(q, z)
    with np.errstate(under="ignore"):
        out = -np.expm1(logsf)
    return np.clip(out, 0.0, 1.0)


def kdist_pdf(q: int, z) -> np.ndarray | float:
    """Density of the normalized cascade power: (2/Gamma(q)) z^{(q-1)/2} K_{q-1}(2 sqrt z).

    This is the exact derivative of kdist_cdf; the identity
    d/du [u^{q/2} K_q(2 sqrt u)] = -u^{(q-1)/2} K_{q-1}(2 sqrt u) collapses
    the three-Bessel forms that appear when the chain rule is written out
    term by term.  For q = 1 the density diverges logarithmically at 0.
    """
    if q < 1 or q != int(q):
        raise ValueError("q must be a positive integer")
    arr = _as_float_array(z)
    scalar = np.isscalar(z) or arr.ndim == 0
    arr = np.atleast_1d(arr).astype(float)
    out = np.empty_like(arr)

    zero = arr == 0.0
    if np.any(zero):
        if q == 1:
            out[zero] = np.inf
        elif q == 2:
            out[zero] = 1.0
        else:
            out[zero] = 1.0 / (q - 1.0)
    unbounded = np.isinf(arr)
    out[unbounded] = 0.0
    pos = ~zero & ~unbounded
    if np.any(pos):
        zp = arr[pos]
        x = 2.0 * np.sqrt(zp)
        logpdf = (
            math.log(2.0)
            - math.lgamma(q)
            + ((q - 1.0) / 2.0) * np.log(zp)
            + log_bessel_k(q - 1, x)
        )
        with np.errstate(under="ignore"):
            out[pos] = np.exp(logpdf)
    return float(out[0]) if scalar else out.reshape(np.shape(np.asarray(z)))
