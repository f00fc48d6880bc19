"""Numerical integration on half lines, and eigenvalue-level integrand kernels.

``semi_infinite_quad`` is an adaptive panel integrator for integrands that
decay like ``e^{-t}`` times a polynomial.  Inner integrals with weight
``e^{-s} s^{b-1}`` on ``[0, inf)`` use generalized Gauss-Laguerre rules, which
absorb the endpoint singularity exactly.

The hypergeometric kernels here are written independently of
:mod:`ilmf.series` (plain term-ratio loops) so that quadrature results serve as
an oracle for the lattice engine.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np
from scipy import special

from .errors import InputError, NoConvergence

__all__ = ["QuadSpec", "semi_infinite_quad", "laguerre_rule", "pfq_eigen", "inc_1g1_eigen"]

_GL_X, _GL_W = np.polynomial.legendre.leggauss(15)


@dataclass(frozen=True)
class QuadSpec:
    rel_tol: float = 1e-9
    abs_tol: float = 1e-12
    max_subdivisions: int = 2000
    tail_cutoff_norm: float = 1e-16

    def __post_init__(self):
        if not (self.rel_tol > 0 and self.abs_tol > 0 and self.tail_cutoff_norm > 0):
            raise InputError("quadrature tolerances must be positive")
        if not self.tail_cutoff_norm < self.abs_tol:
            raise InputError("tail_cutoff_norm must be below abs_tol")
        if self.max_subdivisions < 1:
            raise InputError("max_subdivisions must be positive")


def _panel_values(f, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    half = 0.5 * (b - a)
    t = 0.5 * (a + b)[:, None] + half[:, None] * _GL_X
    vals = np.asarray(f(t.ravel()))
    vals = vals.reshape((len(a), len(_GL_X)) + vals.shape[1:])
    return np.einsum("pk...,k->p...", vals, _GL_W) * half.reshape((-1,) + (1,) * (vals.ndim - 2))


def _find_cutoff(f, lower: float, spec: QuadSpec, shift: float) -> float:
    T = lower + 40.0 + 5.0 * max(shift, 0.0)
    limit = lower + 4000.0
    while True:
        tail = np.max(np.abs(np.asarray(f(np.array([T, T + 5.0])))))
        if tail < spec.tail_cutoff_norm:
            return T
        T += 20.0
        if T > limit:
            raise NoConvergence("integrand does not decay below the tail cutoff")


def semi_infinite_quad(f: Callable, lower: float, spec: QuadSpec | None = None, shift: float = 0.0,
                       vectorized: bool = True) -> np.ndarray:
    """Integrate ``f`` over ``[lower, inf)``.

    ``f`` maps a 1-D array of nodes to an array whose first axis runs over the
    nodes (any trailing shape, e.g. a matrix or eigenvalue vector).  Pass
    ``vectorized=False`` for an integrand taking one scalar at a time.
    ``shift`` is the largest spectral shift in the polynomial factor; it only
    moves the initial truncation point.
    """
    spec = spec or QuadSpec()
    if not math.isfinite(lower) or lower < 0:
        raise InputError("lower limit must be finite and >= 0")
    if not vectorized:
        g = f
        f = lambda t: np.stack([np.asarray(g(float(tk))) for tk in t])  # noqa: E731
    T = _find_cutoff(f, lower, spec, shift)
    length = T - lower
    count = max(4, int(math.ceil(length / 4.0)))
    edges = np.linspace(lower, T, count + 1)
    a, b = edges[:-1], edges[1:]
    accepted = []
    subdivisions = 0
    while len(a):
        whole = _panel_values(f, a, b)
        mid = 0.5 * (a + b)
        fine = _panel_values(f, a, mid) + _panel_values(f, mid, b)
        err = np.abs(whole - fine).reshape(len(a), -1).max(axis=1)
        estimate = fine.sum(axis=0) + sum(accepted, np.zeros_like(fine[0]))
        scale = max(spec.rel_tol * float(np.max(np.abs(estimate))), spec.abs_tol)
        ok = err <= scale * (b - a) / length
        accepted.extend(fine[ok])
        bad = ~ok
        subdivisions += int(bad.sum())
        if subdivisions > spec.max_subdivisions:
            raise NoConvergence(f"subdivision cap {spec.max_subdivisions} reached")
        a, b = np.concatenate([a[bad], mid[bad]]), np.concatenate([mid[bad], b[bad]])
    return np.sum(accepted, axis=0)


@lru_cache(maxsize=512)
def _genlaguerre(order: int, alpha: float):
    x, w = special.roots_genlaguerre(order, alpha)
    return x, w


def laguerre_rule(b: np.ndarray, order: int = 48) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights for ``int_0^inf e^{-s} s^{b-1} g(s) ds`` per eigenvalue ``b``.

    Returns arrays of shape ``(len(b), order)``.  For complex ``b`` the factor
    ``s^{i Im b}`` is folded into the weights; it is not polynomial, so the
    rule is then only approximate (about 1e-7 at order 48 for ``|Im b| < 0.5``).
    """
    b = np.asarray(b, dtype=complex)
    xs, ws = [], []
    for bk in b:
        x, w = _genlaguerre(order, round(float(bk.real) - 1.0, 14))
        xs.append(x)
        ws.append(w * np.exp(1j * bk.imag * np.log(x)))
    return np.array(xs), np.array(ws)


def pfq_eigen(num, den, w, rel_tol: float = 1e-17, max_terms: int = 4000) -> np.ndarray:
    """Generalized hypergeometric sum ``sum prod (num)_m / prod (den)_m w^m / m!``.

    Parameters and ``w`` broadcast against each other.
    """
    num = [np.asarray(p, dtype=complex) for p in num]
    den = [np.asarray(p, dtype=complex) for p in den]
    w = np.asarray(w, dtype=complex)
    shape = np.broadcast_shapes(w.shape, *(p.shape for p in num + den))
    term = np.ones(shape, dtype=complex)
    total = term.copy()
    for m in range(max_terms):
        ratio = w / (m + 1.0)
        for p in num:
            ratio = ratio * (p + m)
        for p in den:
            ratio = ratio / (p + m)
        term = term * ratio
        total = total + term
        if m > 2 and np.all(np.abs(term) <= rel_tol * np.maximum(np.abs(total), 1e-300)):
            return total
    raise NoConvergence("hypergeometric kernel did not converge")


def inc_1g1_eigen(a, x: float, c, w, rel_tol: float = 1e-17, max_terms: int = 2000) -> np.ndarray:
    """Upper incomplete confluent function ``sum [a; x]_m / (c)_m w^m / m!``.

    ``a`` and ``c`` are real eigenvalue vectors of shape (r,), ``w`` has shape (..., r).
    Uses the upward recurrence of the upper symbol with the factor
    ``w^m / ((c)_m m!)`` folded into running products, so nothing overflows.
    """
    a = np.asarray(a, dtype=complex)
    c = np.asarray(c, dtype=complex)
    w = np.asarray(w, dtype=complex)
    if np.any(np.abs(a.imag) > 1e-12):
        raise InputError("inc_1g1_eigen needs real eigenvalues of A")
    a = a.real.astype(complex)
    rg = special.rgamma(a.real)
    term = np.broadcast_to(special.gammaincc(a.real, x), w.shape).astype(complex)
    source = np.broadcast_to(np.exp(a * math.log(x) - x), w.shape).astype(complex)
    total = term.copy()
    for m in range(max_terms):
        step = w / ((c + m) * (m + 1.0))
        term = step * ((a + m) * term + source * rg)
        source = source * x * step
        total = total + term
        if m > 2 and np.all(np.abs(term) + np.abs(source * rg) <= rel_tol * np.maximum(np.abs(total), 1e-300)):
            return total
    raise NoConvergence("incomplete confluent kernel did not converge")
