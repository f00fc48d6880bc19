"""Matrix-valued gamma, incomplete gamma, Pochhammer, Bessel and Laguerre functions.

Each function diagonalizes its matrix argument and applies the scalar kernel
from :mod:`ilmf.scalar` to the spectrum.
"""
from __future__ import annotations

import math

import numpy as np

from . import scalar
from .errors import DomainError, InputError, NoConvergence, NotPositiveStable, SingularValue
from .linalg import apply_scalar_function, as_cmatrix, spectral_decompose

__all__ = [
    "gamma_matrix",
    "gamma_matrix_inverse",
    "inc_gamma_matrix",
    "pochhammer",
    "pochhammer_product",
    "bessel_matrix",
    "laguerre_matrix",
    "laguerre_eigen",
]

KINDS = ("complete", "lower", "upper")


def _positive_stable_form(A):
    S = spectral_decompose(A)
    if not np.all(S.eigenvalues.real > 0):
        raise NotPositiveStable("matrix argument must be positive stable")
    return S


def gamma_matrix(A) -> np.ndarray:
    """Gamma(A) for a positive stable diagonalizable matrix."""
    S = _positive_stable_form(A)
    return apply_scalar_function(S, scalar.gamma)


def gamma_matrix_inverse(A) -> np.ndarray:
    """Reciprocal gamma Gamma^{-1}(A); entire, so only diagonalizability is needed."""
    return apply_scalar_function(spectral_decompose(A), scalar.rgamma)


def inc_gamma_matrix(kind: str, A, x: float) -> np.ndarray:
    """Lower ``gamma(A, x)`` or upper ``Gamma(A, x)`` incomplete gamma matrix function."""
    if not x > 0:
        raise DomainError("x must be positive")
    S = _positive_stable_form(A)
    if kind == "lower":
        return apply_scalar_function(S, lambda lam: scalar.lower_inc_gamma(lam, x))
    if kind == "upper":
        return apply_scalar_function(S, lambda lam: scalar.upper_inc_gamma(lam, x))
    raise InputError(f"kind must be 'lower' or 'upper', got {kind!r}")


def _pochhammer_values(lam: np.ndarray, n: int, kind: str, x: float | None) -> np.ndarray:
    lam = np.asarray(lam, dtype=complex)
    if kind == "complete":
        out = np.empty(lam.shape, dtype=complex)
        poles = (lam.imag == 0) & (lam.real <= 0) & (lam.real == np.round(lam.real))
        ok = ~poles
        if np.any(ok):
            out[ok] = np.exp(np.asarray(scalar.ln_gamma(lam[ok] + n)) - np.asarray(scalar.ln_gamma(lam[ok])))
        # Gamma ratio is undefined at poles; the finite product is exact there
        for idx in np.flatnonzero(poles):
            out[idx] = np.prod(lam[idx] + np.arange(n)) if n else 1.0
        return out
    if x is None or not x > 0:
        raise DomainError("incomplete Pochhammer symbols need x > 0")
    if np.any((lam + n).real <= 0):
        raise SingularValue("incomplete Pochhammer symbol needs Re(lambda + n) > 0")
    # gamma(a + n, x) / Gamma(a) = P(a + n, x) * (a)_n, evaluated in logs
    shifted = lam + n
    log_ratio = np.asarray(scalar.ln_gamma(shifted)) - np.asarray(scalar.ln_gamma(lam))
    if kind == "lower":
        reg = np.asarray(scalar.reg_lower_inc_gamma(shifted, x))
    elif kind == "upper":
        reg = np.asarray(scalar.reg_upper_inc_gamma(shifted, x))
    else:
        raise InputError(f"unknown Pochhammer kind {kind!r}")
    return reg * np.exp(log_ratio)


def pochhammer(A, n: int, kind: str = "complete", x: float | None = None) -> np.ndarray:
    """Pochhammer matrix symbol ``(A)_n`` or its incomplete parts.

    ``kind="lower"`` gives ``(A; x)_n = gamma(A + nI, x) Gamma^{-1}(A)`` and
    ``kind="upper"`` gives ``[A; x]_n = Gamma(A + nI, x) Gamma^{-1}(A)``.
    """
    if int(n) != n or n < 0:
        raise InputError("n must be a non-negative integer")
    n = int(n)
    S = spectral_decompose(A)
    return apply_scalar_function(S, lambda lam: _pochhammer_values(lam, n, kind, x))


def pochhammer_product(A, n: int) -> np.ndarray:
    """``A (A + I) ... (A + (n-1) I)`` by repeated multiplication."""
    A = as_cmatrix(A)
    out = np.eye(A.shape[0], dtype=complex)
    for k in range(int(n)):
        out = out @ (A + k * np.eye(A.shape[0]))
    return out


def _bessel_j_values(lam: np.ndarray, w: complex, terms: int) -> tuple[np.ndarray, np.ndarray, int]:
    """Partial sum of the Bessel series at each eigenvalue, last term, terms used."""
    log_half = np.log(complex(w) / 2.0)
    total = np.zeros(lam.shape, dtype=complex)
    term = total
    for m in range(terms):
        term = ((-1.0) ** m / math.factorial(m)) * np.asarray(scalar.rgamma(lam + m + 1.0)) \
            * np.exp((lam + 2 * m) * log_half)
        total = total + term
        if m > 0 and np.max(np.abs(term)) <= 1e-16 * max(np.max(np.abs(total)), 1e-300):
            return total, term, m + 1
    return total, term, terms


def _bessel_j_matrix(S, w: complex, terms: int) -> np.ndarray:
    total, last_term, used = _bessel_j_values(S.eigenvalues, w, terms)
    last = S.compose(last_term)
    value = S.compose(total)
    if used >= terms and np.linalg.norm(last) > 1e-16 * max(np.linalg.norm(value), 1e-300):
        raise NoConvergence("Bessel matrix series hit the term cap")
    return value


def bessel_matrix(variant: str, A, z: float, terms: int = 200) -> np.ndarray:
    """Bessel ``J_A(z)`` and the two modified forms ``I_A(z)`` for real ``z > 0``.

    ``I_left`` rotates the argument by ``+i pi/2`` with prefactor
    ``exp(-A i pi / 2)``; ``I_right`` uses the opposite rotation.
    """
    if not (0 < z <= 20):
        raise DomainError("bessel_matrix requires 0 < z <= 20")
    S = spectral_decompose(A)
    if variant == "J":
        return _bessel_j_matrix(S, complex(z), terms)
    if variant == "I_left":
        pre = S.compose(np.exp(-0.5j * np.pi * S.eigenvalues))
        return pre @ _bessel_j_matrix(S, z * np.exp(0.5j * np.pi), terms)
    if variant == "I_right":
        pre = S.compose(np.exp(0.5j * np.pi * S.eigenvalues))
        return pre @ _bessel_j_matrix(S, z * np.exp(-0.5j * np.pi), terms)
    raise InputError(f"variant must be J, I_left or I_right, got {variant!r}")


def laguerre_matrix(A, lam: float, n: int, z: complex) -> np.ndarray:
    """Laguerre matrix polynomial ``L_n^{(A, lambda)}(z)`` from its finite sum."""
    A = as_cmatrix(A)
    r = A.shape[0]
    eye = np.eye(r)
    top = pochhammer(A + eye, n)
    out = np.zeros((r, r), dtype=complex)
    for k in range(n + 1):
        coef = (-1.0) ** k * lam**k / (math.factorial(k) * math.factorial(n - k))
        inner = np.linalg.solve(pochhammer(A + eye, k), eye)
        out = out + coef * (top @ inner) * complex(z) ** k
    return out


def laguerre_eigen(alpha, n: int, w, lam: float = 1.0):
    """Scalar ``L_n^{(alpha, lambda)}(w)`` broadcast over arrays of ``alpha`` and ``w``."""
    alpha = np.asarray(alpha, dtype=complex)
    w = np.asarray(w, dtype=complex)
    out = np.zeros(np.broadcast(alpha, w).shape, dtype=complex)
    # (alpha+1)_n / (alpha+1)_k = (alpha+k+1) ... (alpha+n)
    for k in range(n + 1):
        ratio = np.ones(alpha.shape, dtype=complex)
        for j in range(k, n):
            ratio = ratio * (alpha + 1 + j)
        coef = (-1.0) ** k * lam**k / (math.factorial(k) * math.factorial(n - k))
        out = out + coef * ratio * w**k
    return out
