"""Brute-force scalar lattice sums.

Used as an oracle for the shell-convolution engine: every term of the
multi-index series is formed directly from gamma-function ratios (scipy) and
the lattice is enumerated composition by composition, shell by shell, until a
shell becomes negligible.  Scalar parameters only; the first parameter ``a``
must be real and positive for the incomplete kinds.
"""
from __future__ import annotations

from functools import lru_cache
from itertools import combinations

import numpy as np
from scipy import special

__all__ = ["compositions", "poch", "inc_poch", "scalar_ilmf", "scalar_psi2", "scalar_phi2",
           "scalar_1g1", "scalar_2f1", "lattice_sum"]


@lru_cache(maxsize=None)
def compositions(M: int, n: int) -> np.ndarray:
    """All ``m`` in N^n with ``sum(m) == M``, shape (count, n) (stars and bars)."""
    if n == 1:
        return np.array([[M]])
    rows = []
    for bars in combinations(range(M + n - 1), n - 1):
        prev = -1
        parts = []
        for b in bars:
            parts.append(b - prev - 1)
            prev = b
        parts.append(M + n - 2 - prev)
        rows.append(parts)
    out = np.array(rows, dtype=int)
    out.setflags(write=False)
    return out


def poch(b, m):
    """Rising factorial ``(b)_m`` through log-gamma."""
    b = np.asarray(b, dtype=complex)
    m = np.asarray(m)
    return np.exp(special.loggamma(b + m) - special.loggamma(b))


def inc_poch(kind: str, a: float, x: float | None, M):
    """``(a)_M``, ``(a; x)_M`` or ``[a; x]_M`` for real ``a``."""
    M = np.asarray(M, dtype=float)
    if kind == "complete":
        return poch(a, M)
    full = np.exp(special.gammaln(a + M) - special.gammaln(a))
    if kind == "lower":
        return special.gammainc(a + M, x) * full
    if kind == "upper":
        return special.gammaincc(a + M, x) * full
    raise ValueError(kind)


def _factorial(m):
    return special.factorial(m, exact=False)


def lattice_sum(term, n: int, rel_tol: float = 1e-17, max_shell: int = 400, min_shell: int = 4) -> complex:
    """Sum ``term(m)`` over N^n shell by shell; ``term`` maps (count, n) int arrays to values."""
    total = 0j
    quiet = 0
    for M in range(max_shell + 1):
        shell = complex(np.sum(term(compositions(M, n))))
        total += shell
        if M >= min_shell and abs(shell) <= rel_tol * max(abs(total), 1e-300):
            quiet += 1
            if quiet >= 3:
                return total
        else:
            quiet = 0
    raise ArithmeticError("lattice oracle did not converge")


def scalar_ilmf(family: str, kind: str, a: float, x: float | None, bs, cs, zs, **kw) -> complex:
    """Scalar ILMF of family A, C or D by direct enumeration."""
    zs = np.asarray(zs, dtype=complex)
    bs = list(bs)
    cs = list(cs)
    n = len(zs)

    def term(m):
        M = m.sum(axis=1)
        t = inc_poch(kind, a, x, M) * np.prod(zs ** m / _factorial(m), axis=1)
        if family == "A":
            for i in range(n):
                t = t * poch(bs[i], m[:, i]) / poch(cs[i], m[:, i])
        elif family == "C":
            t = t * poch(bs[0], M)
            for i in range(n):
                t = t / poch(cs[i], m[:, i])
        elif family == "D":
            t = t / poch(cs[0], M)
            for i in range(n):
                t = t * poch(bs[i], m[:, i])
        else:
            raise ValueError(family)
        return t

    return lattice_sum(term, n, **kw)


def scalar_2f1(kind: str, a: float, x: float | None, b, c, z, **kw) -> complex:
    return scalar_ilmf("A", kind, a, x, [b], [c], [z], **kw)


def scalar_psi2(b, cs, zs, **kw) -> complex:
    zs = np.asarray(zs, dtype=complex)

    def term(m):
        t = poch(b, m.sum(axis=1)) * np.prod(zs ** m / _factorial(m), axis=1)
        for i, c in enumerate(cs):
            t = t / poch(c, m[:, i])
        return t

    return lattice_sum(term, len(zs), **kw)


def scalar_phi2(bs, c, zs, **kw) -> complex:
    zs = np.asarray(zs, dtype=complex)

    def term(m):
        t = np.prod(zs ** m / _factorial(m), axis=1) / poch(c, m.sum(axis=1))
        for i, b in enumerate(bs):
            t = t * poch(b, m[:, i])
        return t

    return lattice_sum(term, len(zs), **kw)


def scalar_1g1(kind: str, a: float, x: float | None, c, z, **kw) -> complex:
    def term(m):
        M = m[:, 0]
        return inc_poch(kind, a, x, M) / poch(c, M) * complex(z) ** M / _factorial(M)

    return lattice_sum(term, 1, **kw)
