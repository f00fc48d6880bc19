"""Dense complex matrix helpers and primary matrix functions.

Every matrix function in the package is evaluated through a diagonalizing
similarity ``M = P diag(lambda) P^{-1}``.  Families of commuting matrices share
one transform, so any formula in several commuting parameters reduces to the
same scalar formula applied to their joint eigenvalues.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Mapping, Sequence

import numpy as np

from .errors import (
    InputError,
    NonCommuting,
    NonDiagonalizable,
    NonFinite,
    NonPositiveBase,
    NonSquare,
    SingularValue,
)

__all__ = [
    "as_cmatrix",
    "SpectralForm",
    "CommutingFamily",
    "spectral_decompose",
    "apply_scalar_function",
    "matrix_power_base",
    "is_positive_stable",
    "simultaneous_diagonalize",
    "make_commuting_family",
    "rel_frobenius",
    "matrix_to_json",
    "matrix_from_json",
]

MAX_EIGVEC_COND = 1e8


def as_cmatrix(data, square: bool = True) -> np.ndarray:
    """Coerce ``data`` to a finite 2-D complex array."""
    m = np.array(data, dtype=complex)
    if m.ndim == 0:
        m = m.reshape(1, 1)
    if m.ndim != 2:
        raise NonSquare(f"expected a 2-D matrix, got shape {m.shape}")
    if square and m.shape[0] != m.shape[1]:
        raise NonSquare(f"expected a square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise NonFinite("matrix entries must be finite")
    return m


def rel_frobenius(a, b, floor: float = 1e-30) -> float:
    """Frobenius distance of ``a`` and ``b`` relative to the larger of the two."""
    a = np.asarray(a)
    b = np.asarray(b)
    scale = max(np.linalg.norm(a), np.linalg.norm(b), floor)
    return float(np.linalg.norm(a - b) / scale)


def _sort_order(eigs: np.ndarray) -> np.ndarray:
    # round away eigen-solver noise so that the order is reproducible
    re = np.round(eigs.real, 12)
    im = np.round(eigs.imag, 12)
    return np.lexsort((im, re))


@dataclass(frozen=True)
class SpectralForm:
    """``M = transform @ diag(eigenvalues) @ inverse_transform``."""

    transform: np.ndarray
    inverse_transform: np.ndarray
    eigenvalues: np.ndarray

    @property
    def size(self) -> int:
        return self.eigenvalues.shape[0]

    def compose(self, values) -> np.ndarray:
        """Rebuild a matrix from values attached to the eigenvalues."""
        values = np.asarray(values, dtype=complex)
        return (self.transform * values) @ self.inverse_transform


def spectral_decompose(M, max_cond: float = MAX_EIGVEC_COND) -> SpectralForm:
    """Diagonalize ``M``; defective or badly conditioned input is rejected.

    Eigenvalues are sorted by real part then imaginary part.
    """
    M = as_cmatrix(M)
    r = M.shape[0]
    eigs, P = np.linalg.eig(M)
    order = _sort_order(eigs)
    eigs = eigs[order]
    P = P[:, order]
    cond = np.linalg.cond(P)
    if not np.isfinite(cond) or cond > max_cond:
        raise NonDiagonalizable(f"eigenvector matrix condition number {cond:.3g} exceeds {max_cond:.1g}")
    Pinv = np.linalg.inv(P)
    if np.linalg.norm(P @ Pinv - np.eye(r)) > 1e-10 * r * max(1.0, cond):
        raise NonDiagonalizable("eigenvector matrix could not be inverted accurately")
    scale = max(np.linalg.norm(M), 1e-300)
    if np.linalg.norm((P * eigs) @ Pinv - M) > 1e-9 * scale * max(1.0, cond / 1e3):
        raise NonDiagonalizable("spectral reconstruction failed")
    return SpectralForm(P, Pinv, eigs)


def apply_scalar_function(S: SpectralForm, f: Callable) -> np.ndarray:
    """Primary matrix function ``P diag(f(lambda_1), ..., f(lambda_r)) P^{-1}``.

    ``f`` may be vectorized; scalar callables are applied element by element.
    """
    try:
        values = np.asarray(f(S.eigenvalues), dtype=complex)
        if values.shape != S.eigenvalues.shape:
            raise TypeError
    except TypeError:
        values = np.array([f(lam) for lam in S.eigenvalues], dtype=complex)
    if not np.all(np.isfinite(values)):
        raise SingularValue("scalar function is not finite at an eigenvalue")
    return S.compose(values)


def matrix_power_base(t: float, A) -> np.ndarray:
    """``t**A = exp(A ln t)`` for a positive real base."""
    if not t > 0:
        raise NonPositiveBase(f"base must be positive, got {t!r}")
    S = spectral_decompose(A)
    log_t = math.log(t)
    return apply_scalar_function(S, lambda lam: np.exp(lam * log_t))


def is_positive_stable(M) -> bool:
    """True iff every eigenvalue has a strictly positive real part.

    Only the spectrum is inspected, so defective matrices are accepted.
    """
    M = as_cmatrix(M)
    return bool(np.all(np.linalg.eigvals(M).real > 0))


@dataclass(frozen=True)
class CommutingFamily:
    """Matrices that share one diagonalizing transform.

    ``members`` maps a name to the eigenvalue vector of that member, in the
    column order of ``transform``.
    """

    transform: np.ndarray
    inverse_transform: np.ndarray
    members: dict = field(default_factory=dict)

    @property
    def size(self) -> int:
        return self.transform.shape[0]

    def names(self) -> list:
        return list(self.members)

    def eigenvalues(self, name) -> np.ndarray:
        return self.members[name]

    def compose(self, values) -> np.ndarray:
        values = np.asarray(values, dtype=complex)
        return (self.transform * values) @ self.inverse_transform

    def matrix(self, name) -> np.ndarray:
        return self.compose(self.members[name])

    def matrices(self) -> list:
        return [self.matrix(name) for name in self.members]

    def condition(self) -> float:
        return float(np.linalg.cond(self.transform))


def _mixing_weights(k: int) -> np.ndarray:
    idx = np.arange(1, k + 1)
    return np.sqrt(idx) * np.exp(0.9j * idx + 0.31j * idx**2)


def simultaneous_diagonalize(matrices, names: Sequence | None = None) -> CommutingFamily:
    """Find one transform diagonalizing every matrix in a commuting set.

    A fixed generic linear combination of the members is diagonalized and the
    transform is validated against each member; non-commuting or defective
    input raises.
    """
    if isinstance(matrices, Mapping):
        names = list(matrices)
        mats = [as_cmatrix(matrices[k]) for k in names]
    else:
        mats = [as_cmatrix(m) for m in matrices]
        names = list(names) if names is not None else list(range(len(mats)))
    if not mats:
        raise InputError("need at least one matrix")
    r = mats[0].shape[0]
    if any(m.shape != (r, r) for m in mats):
        raise NonSquare("all matrices of a family must have the same size")
    scales = [max(np.linalg.norm(m), 1e-300) for m in mats]
    w = _mixing_weights(len(mats))
    combo = sum(wk * m / s for wk, m, s in zip(w, mats, scales))
    S = spectral_decompose(combo)
    P, Pinv = S.transform, S.inverse_transform
    cond = np.linalg.cond(P)
    members = {}
    for name, m, s in zip(names, mats, scales):
        D = Pinv @ m @ P
        diag = np.diag(D).copy()
        off = np.linalg.norm(D - np.diag(diag))
        if off > 1e-9 * s * max(1.0, cond):
            raise NonCommuting(f"matrix {name!r} is not diagonalized by the shared transform (off-diagonal {off:.2e})")
        members[name] = diag
    return CommutingFamily(P, Pinv, members)


def make_commuting_family(seed: int, count: int, r: int, spectrum_range=(0.6, 2.4),
                          complex_transform: bool = True, max_cond: float = 100.0) -> CommutingFamily:
    """Seeded family of ``count`` commuting ``r x r`` matrices with real spectra.

    Members are named ``M0, M1, ...``; eigenvalues are uniform on
    ``spectrum_range``.  The shared transform has condition number at most
    ``max_cond``.
    """
    if not 1 <= r <= 4:
        raise InputError("family size r must be in [1, 4]")
    lo, hi = spectrum_range
    rng = np.random.default_rng(seed)
    if r == 1:
        P = np.eye(1, dtype=complex)
    else:
        while True:
            G = rng.standard_normal((r, r))
            if complex_transform:
                G = G + 1j * rng.standard_normal((r, r))
            P = np.eye(r) + 0.5 * G / math.sqrt(r)
            if np.linalg.cond(P) <= max_cond:
                break
    P = np.asarray(P, dtype=complex)
    members = {f"M{k}": rng.uniform(lo, hi, size=r).astype(complex) for k in range(count)}
    return CommutingFamily(P, np.linalg.inv(P), members)


# -- JSON encoding -----------------------------------------------------------

def matrix_to_json(M) -> dict:
    """``{"rows", "cols", "data": [[[re, im], ...], ...]}``, row-major."""
    M = np.asarray(M, dtype=complex)
    rows, cols = M.shape
    return {
        "rows": rows,
        "cols": cols,
        "data": [[[float(v.real), float(v.imag)] for v in row] for row in M],
    }


def _entry(value, where: str) -> complex:
    if isinstance(value, bool):
        raise InputError(f"{where}: expected a number or [re, im], got {value!r}")
    if isinstance(value, (int, float)):
        out = complex(value)
    elif isinstance(value, (list, tuple)) and len(value) == 2 and all(
            isinstance(v, (int, float)) and not isinstance(v, bool) for v in value):
        out = complex(value[0], value[1])
    else:
        raise InputError(f"{where}: expected a number or [re, im], got {value!r}")
    if not (math.isfinite(out.real) and math.isfinite(out.imag)):
        raise InputError(f"{where}: entries must be finite")
    return out


def matrix_from_json(obj, where: str = "matrix") -> np.ndarray:
    """Inverse of :func:`matrix_to_json` with field-level diagnostics."""
    if not isinstance(obj, Mapping):
        raise InputError(f"{where}: expected an object with rows, cols, data")
    for key in ("rows", "cols", "data"):
        if key not in obj:
            raise InputError(f"{where}.{key}: missing")
    rows, cols, data = obj["rows"], obj["cols"], obj["data"]
    if not (isinstance(rows, int) and rows > 0):
        raise InputError(f"{where}.rows: must be a positive integer")
    if not (isinstance(cols, int) and cols > 0):
        raise InputError(f"{where}.cols: must be a positive integer")
    if not isinstance(data, list) or len(data) != rows:
        raise InputError(f"{where}.data: expected {rows} rows")
    out = np.empty((rows, cols), dtype=complex)
    for i, row in enumerate(data):
        if not isinstance(row, list) or len(row) != cols:
            raise InputError(f"{where}.data[{i}]: expected {cols} entries")
        for j, v in enumerate(row):
            out[i, j] = _entry(v, f"{where}.data[{i}][{j}]")
    return out
