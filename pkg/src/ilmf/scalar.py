"""Complex-parameter scalar special functions.

These are the kernels lifted to matrices by functional calculus.  All
functions accept numpy arrays and broadcast their arguments.
"""
from __future__ import annotations

import math

import numpy as np

from .errors import DomainError, NoConvergence, SingularValue

__all__ = [
    "ln_gamma",
    "gamma",
    "rgamma",
    "lower_inc_gamma",
    "upper_inc_gamma",
    "reg_lower_inc_gamma",
    "reg_upper_inc_gamma",
    "bessel_j",
]

_LANCZOS_G = 7.0
_LANCZOS_P = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)
_EPS = np.finfo(float).eps


def _is_pole(z: np.ndarray) -> np.ndarray:
    return (z.imag == 0) & (z.real <= 0) & (z.real == np.round(z.real))


def _lanczos_ln_gamma(z: np.ndarray) -> np.ndarray:
    # valid for Re(z) >= 0.5
    z = z - 1.0
    acc = np.full(z.shape, _LANCZOS_P[0], dtype=complex)
    for i, p in enumerate(_LANCZOS_P[1:], start=1):
        acc = acc + p / (z + i)
    t = z + _LANCZOS_G + 0.5
    return _HALF_LOG_2PI + (z + 0.5) * np.log(t) - t + np.log(acc)


def ln_gamma(z):
    """Log-gamma on the principal branch; raises at non-positive integers."""
    z = np.asarray(z, dtype=complex)
    if np.any(_is_pole(z)):
        raise SingularValue("ln_gamma has poles at the non-positive integers")
    out = np.empty(z.shape, dtype=complex)
    right = z.real >= 0.5
    out[right] = _lanczos_ln_gamma(z[right])
    left = ~right
    if np.any(left):
        zl = z[left]
        # reflection: Gamma(z) Gamma(1 - z) = pi / sin(pi z)
        out[left] = math.log(math.pi) - np.log(np.sin(np.pi * zl)) - _lanczos_ln_gamma(1.0 - zl)
    if out.ndim == 0:
        return complex(out)
    return out


def gamma(z):
    return np.exp(ln_gamma(z))


def rgamma(z):
    """Reciprocal gamma, entire: zero at the non-positive integers."""
    z = np.asarray(z, dtype=complex)
    poles = _is_pole(z)
    safe = np.where(poles, 1.0, z)
    out = np.where(poles, 0.0, np.exp(-np.asarray(ln_gamma(safe))))
    if out.ndim == 0:
        return complex(out)
    return out


def _check_inc_args(a, x):
    a = np.asarray(a, dtype=complex)
    x = np.asarray(x, dtype=float)
    if np.any(a.real <= 0):
        raise DomainError("incomplete gamma requires Re(a) > 0")
    if np.any(x < 0) or not np.all(np.isfinite(x)):
        raise DomainError("incomplete gamma requires finite x >= 0")
    return np.broadcast_arrays(a, x)


def _reg_lower_series(a: np.ndarray, x: np.ndarray, max_iter: int = 5000) -> np.ndarray:
    # P(a, x) = x^a e^{-x} / Gamma(a+1) * sum_k x^k / ((a+1) ... (a+k))
    term = np.ones(a.shape, dtype=complex)
    total = term.copy()
    k = 0
    while True:
        k += 1
        term = term * x / (a + k)
        total = total + term
        if np.all(np.abs(term) <= _EPS * 0.25 * np.abs(total)):
            break
        if k > max_iter:
            raise NoConvergence("incomplete gamma series did not converge")
    return total * np.exp(a * np.log(x) - x - np.asarray(ln_gamma(a + 1.0)))


def _reg_upper_cf(a: np.ndarray, x: np.ndarray, max_iter: int = 5000) -> np.ndarray:
    # modified Lentz on Gamma(a, x) = e^{-x} x^a / (x + 1 - a - 1(1-a)/(x + 3 - a - ...))
    tiny = 1e-300
    b = x + 1.0 - a
    c = np.full(a.shape, 1.0 / tiny, dtype=complex)
    d = 1.0 / b
    h = d.copy()
    for i in range(1, max_iter + 1):
        an = -i * (i - a)
        b = b + 2.0
        d = an * d + b
        d = np.where(np.abs(d) < tiny, tiny, d)
        c = b + an / c
        c = np.where(np.abs(c) < tiny, tiny, c)
        d = 1.0 / d
        delta = d * c
        h = h * delta
        if np.all(np.abs(delta - 1.0) <= _EPS):
            break
    else:
        raise NoConvergence("incomplete gamma continued fraction did not converge")
    return np.exp(a * np.log(x) - x - np.asarray(ln_gamma(a))) * h


def _reg_pair(a, x):
    """Regularized (P, Q) with P + Q = 1."""
    a, x = _check_inc_args(a, x)
    shape = a.shape
    a = a.ravel()
    x = x.ravel()
    P = np.zeros(a.shape, dtype=complex)
    Q = np.ones(a.shape, dtype=complex)
    use_series = (x > 0) & (x < a.real + 1.0)
    use_cf = x >= a.real + 1.0
    if np.any(use_series):
        P[use_series] = _reg_lower_series(a[use_series], x[use_series])
        Q[use_series] = 1.0 - P[use_series]
    if np.any(use_cf):
        Q[use_cf] = _reg_upper_cf(a[use_cf], x[use_cf])
        P[use_cf] = 1.0 - Q[use_cf]
    return P.reshape(shape), Q.reshape(shape), a.reshape(shape)


def _inc_gamma_pair(a, x):
    P, Q, a = _reg_pair(a, x)
    full = np.asarray(gamma(a), dtype=complex)
    lower = P * full
    upper = Q * full
    # the directly computed side keeps full relative accuracy
    return lower, upper


def _unwrap(v):
    return complex(v) if np.ndim(v) == 0 else v


def lower_inc_gamma(a, x):
    """gamma(a, x) = int_0^x e^{-t} t^{a-1} dt for Re(a) > 0, x >= 0.

    Power series below ``x = Re(a) + 1``; above it the continued fraction for
    the upper function is subtracted from the complete gamma.
    """
    return _unwrap(_inc_gamma_pair(a, x)[0])


def upper_inc_gamma(a, x):
    """Gamma(a, x) = int_x^inf e^{-t} t^{a-1} dt; the complement of :func:`lower_inc_gamma`."""
    return _unwrap(_inc_gamma_pair(a, x)[1])


def reg_lower_inc_gamma(a, x):
    """Regularized lower incomplete gamma P(a, x) = gamma(a, x) / Gamma(a)."""
    return _unwrap(_reg_pair(a, x)[0])


def reg_upper_inc_gamma(a, x):
    """Regularized upper incomplete gamma Q(a, x) = Gamma(a, x) / Gamma(a)."""
    return _unwrap(_reg_pair(a, x)[1])


def bessel_j(order, z, max_terms: int = 500):
    """Bessel function of the first kind by its power series.

    Intended for ``0 < z <= 50`` and ``Re(order) > -1``.  The series loses
    roughly ``e^z`` relative accuracy to cancellation for large ``z``.
    """
    order = np.asarray(order, dtype=complex)
    zz = np.asarray(z, dtype=complex)
    if np.any(order.real <= -1):
        raise DomainError("bessel_j requires Re(order) > -1")
    if np.any(zz.imag != 0) or np.any(zz.real <= 0) or np.any(zz.real > 50):
        raise DomainError("bessel_j requires real z in (0, 50]")
    order, zz = np.broadcast_arrays(order, zz)
    half = zz / 2.0
    term = np.exp(order * np.log(half)) * rgamma(order + 1.0)
    total = term.copy()
    q = -half * half
    for m in range(1, max_terms + 1):
        term = term * q / (m * (order + m))
        total = total + term
        if np.all(np.abs(term) <= 1e-16 * np.abs(total)):
            break
    else:
        raise NoConvergence("Bessel series did not converge")
    return _unwrap(total)
