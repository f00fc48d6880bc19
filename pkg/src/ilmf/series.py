"""Truncated multi-index series for the incomplete Lauricella matrix functions.

Every series handled here has terms of the form

    omega_M * kappa(m) * prod_i v_i(m_i) z_i^{m_i},    M = m_1 + ... + m_n,

where ``omega`` depends only on the shell index ``M``, ``v_i`` only on one
index, and ``kappa`` is 1, a multinomial coefficient, or its square.  A shell
sum is therefore a weighted convolution of the per-index sequences, and the
whole lattice is summed shell by shell on the joint eigenvalues of the
(commuting) parameter matrices.  Factorials are split between ``omega`` and
the ``v_i`` so that no intermediate overflows for orders up to a few hundred.

Coefficient sequences are built by ratio recurrences (no per-term gamma
calls).  The incomplete symbols ``(A; x)_M`` and ``[A; x]_M`` use the
three-term recurrences of the incomplete gamma function: upward for the upper
symbol, downward from the top shell for the lower one (both directions are
free of cancellation).
"""
from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

import numpy as np

from . import scalar
from .errors import GuardViolation, InputError, NoConvergence, NotPositiveStable, SingularValue
from .linalg import as_cmatrix, matrix_from_json, matrix_to_json, simultaneous_diagonalize

__all__ = [
    "FAMILIES",
    "KINDS",
    "SeriesPolicy",
    "Evaluation",
    "IlmfParams",
    "LatticeSeries",
    "ilmf",
    "ilmf_series",
    "hyp1f1",
    "hyp0f1",
    "hyp1f1_series",
    "hyp0f1_series",
    "inc_gauss_2f1",
    "confluent_psi2",
    "confluent_phi2",
    "inc_confluent_1g1",
    "theta_apply",
    "check_guard",
    "symbol_sequence",
    "eigen_psi2",
    "eigen_phi2",
]

FAMILIES = ("A", "C", "D")
KINDS = ("lower", "upper", "complete")

# a truncation whose last shell exceeds this fraction of the value is an error
_DIVERGENCE_RATIO = 1e-6
_KERNEL_START_ORDER = 48
_KERNEL_MAX_ORDER = 512
_CONFLUENT_Z_MAX = 10.0


@dataclass(frozen=True)
class SeriesPolicy:
    """Truncation orders, tail tolerance and convergence guard."""

    max_order_per_index: int = 40
    max_total_order: int = 80
    tail_tol: float = 1e-14
    z_guard: float = 0.5

    def __post_init__(self):
        if self.max_order_per_index < 0 or self.max_total_order < 0:
            raise InputError("series orders must be non-negative")
        if self.max_total_order < self.max_order_per_index:
            raise InputError("max_total_order must be >= max_order_per_index")
        if not self.tail_tol > 0:
            raise InputError("tail_tol must be positive")
        if not self.z_guard > 0:
            raise InputError("z_guard must be positive")

    def to_json(self) -> dict:
        return dataclasses.asdict(self)


@dataclass(frozen=True)
class Evaluation:
    value: np.ndarray
    terms_summed: int
    tail_estimate: float
    truncated: bool

    def to_json(self) -> dict:
        return {
            "value": matrix_to_json(self.value),
            "terms_summed": int(self.terms_summed),
            "tail_estimate": float(self.tail_estimate),
            "truncated": bool(self.truncated),
        }


# -- parameters --------------------------------------------------------------

def _as_complex(value, where: str) -> complex:
    if isinstance(value, (list, tuple)) and len(value) == 2:
        value = complex(value[0], value[1])
    try:
        out = complex(value)
    except (TypeError, ValueError):
        raise InputError(f"{where}: expected a complex number, got {value!r}") from None
    if not (math.isfinite(out.real) and math.isfinite(out.imag)):
        raise InputError(f"{where}: must be finite")
    return out


@dataclass(frozen=True, eq=False)
class IlmfParams:
    """Arguments of one ILMF evaluation.

    Families ``A`` and ``D`` take ``n`` numerator matrices ``B_list``; family
    ``C`` takes one.  Families ``A`` and ``C`` take ``n`` denominator matrices
    ``C_list``; family ``D`` takes one.  ``x`` is ignored for the complete kind.
    """

    family: str
    kind: str
    A: np.ndarray
    x: float | None
    B_list: tuple
    C_list: tuple
    z_list: tuple

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise InputError(f"family: must be one of {FAMILIES}, got {self.family!r}")
        if self.kind not in KINDS:
            raise InputError(f"kind: must be one of {KINDS}, got {self.kind!r}")
        set_ = lambda k, v: object.__setattr__(self, k, v)  # noqa: E731
        set_("A", as_cmatrix(self.A))
        set_("B_list", tuple(as_cmatrix(b) for b in self.B_list))
        set_("C_list", tuple(as_cmatrix(c) for c in self.C_list))
        set_("z_list", tuple(_as_complex(z, f"z_list[{i}]") for i, z in enumerate(self.z_list)))
        n = len(self.z_list)
        if n < 1:
            raise InputError("z_list: need at least one variable")
        nb = 1 if self.family == "C" else n
        nc = 1 if self.family == "D" else n
        if len(self.B_list) != nb:
            raise InputError(f"B_list: family {self.family} with n={n} needs {nb} matrices, got {len(self.B_list)}")
        if len(self.C_list) != nc:
            raise InputError(f"C_list: family {self.family} with n={n} needs {nc} matrices, got {len(self.C_list)}")
        r = self.A.shape[0]
        if any(m.shape != (r, r) for m in self.B_list + self.C_list):
            raise InputError("all parameter matrices must have the same size")
        if self.kind == "complete":
            set_("x", None)
        else:
            if self.x is None or not (float(self.x) > 0 and math.isfinite(float(self.x))):
                raise InputError("x: incomplete kinds need a finite x > 0")
            set_("x", float(self.x))

    @property
    def n(self) -> int:
        return len(self.z_list)

    @property
    def r(self) -> int:
        return self.A.shape[0]

    def replace(self, **changes) -> "IlmfParams":
        if changes.get("kind") == "complete" or (changes.get("kind") is None and self.kind == "complete"):
            changes.setdefault("x", None)
        return dataclasses.replace(self, **changes)

    def shifted(self, a: int = 0, b: dict | None = None, c: dict | None = None) -> "IlmfParams":
        """Copy with ``A + aI``, ``B_i + b[i] I`` and ``C_i + c[i] I``."""
        eye = np.eye(self.r)
        B = list(self.B_list)
        C = list(self.C_list)
        for i, k in (b or {}).items():
            B[i] = B[i] + k * eye
        for i, k in (c or {}).items():
            C[i] = C[i] + k * eye
        return self.replace(A=self.A + a * eye, B_list=tuple(B), C_list=tuple(C))

    def to_json(self) -> dict:
        return {
            "family": self.family,
            "kind": self.kind,
            "A": matrix_to_json(self.A),
            "x": self.x,
            "B_list": [matrix_to_json(b) for b in self.B_list],
            "C_list": [matrix_to_json(c) for c in self.C_list],
            "z_list": [[z.real, z.imag] for z in self.z_list],
        }

    @classmethod
    def from_json(cls, obj) -> "IlmfParams":
        if not isinstance(obj, dict):
            raise InputError("params: expected a JSON object")
        for key in ("family", "kind", "A", "B_list", "C_list", "z_list"):
            if key not in obj:
                raise InputError(f"{key}: missing")
        for key in ("B_list", "C_list", "z_list"):
            if not isinstance(obj[key], list):
                raise InputError(f"{key}: expected a list")
        x = obj.get("x")
        if x is not None and (isinstance(x, bool) or not isinstance(x, (int, float))):
            raise InputError("x: expected a number")
        return cls(
            family=obj["family"],
            kind=obj["kind"],
            A=matrix_from_json(obj["A"], "A"),
            x=x,
            B_list=tuple(matrix_from_json(b, f"B_list[{i}]") for i, b in enumerate(obj["B_list"])),
            C_list=tuple(matrix_from_json(c, f"C_list[{i}]") for i, c in enumerate(obj["C_list"])),
            z_list=tuple(_as_complex(z, f"z_list[{i}]") for i, z in enumerate(obj["z_list"])),
        )


# -- scalar sequences on eigenvalue arrays -------------------------------------

def _ratio_sequence(ratios: np.ndarray) -> np.ndarray:
    """``seq[0] = 1``, ``seq[m+1] = seq[m] * ratios[..., m]``."""
    ones = np.ones(ratios.shape[:-1] + (1,), dtype=complex)
    return np.concatenate([ones, np.cumprod(ratios, axis=-1)], axis=-1)


def _check_shift_safe(c: np.ndarray, L: int, name: str) -> None:
    m = np.arange(L + 1)
    if np.any(np.abs(np.asarray(c)[..., None] + m) < 1e-12):
        raise SingularValue(f"{name} + kI is singular for some k >= 0")


def symbol_sequence(kind: str, a, x: float | None, N: int) -> np.ndarray:
    """``P_M / M!`` for ``M = 0..N`` where ``P_M`` is ``(a)_M``, ``(a; x)_M`` or ``[a; x]_M``."""
    a = np.asarray(a, dtype=complex)
    M = np.arange(N)
    if kind == "complete":
        return _ratio_sequence((a[..., None] + M) / (M + 1.0))
    if np.any(a.real <= 0):
        raise NotPositiveStable("incomplete symbols need a positive stable A")
    log_x = math.log(x)
    rg = np.asarray(scalar.rgamma(a))
    out = np.empty(a.shape + (N + 1,), dtype=complex)

    def source(k):
        # x^{a+k} e^{-x} / (Gamma(a) k!)
        return np.exp((a + k) * log_x - x - math.lgamma(k + 1.0)) * rg

    if kind == "upper":
        out[..., 0] = scalar.reg_upper_inc_gamma(a, x)
        for k in range(N):
            out[..., k + 1] = ((a + k) * out[..., k] + source(k)) / (k + 1.0)
        return out
    if kind == "lower":
        top = a + N
        log_poch = np.asarray(scalar.ln_gamma(top)) - np.asarray(scalar.ln_gamma(a)) - math.lgamma(N + 1.0)
        out[..., N] = np.asarray(scalar.reg_lower_inc_gamma(top, x)) * np.exp(log_poch)
        for k in range(N - 1, -1, -1):
            out[..., k] = ((k + 1.0) * out[..., k + 1] + source(k)) / (a + k)
        return out
    raise InputError(f"unknown kind {kind!r}")


@lru_cache(maxsize=64)
def _conv_weights(conv: str, N: int) -> np.ndarray:
    W = np.zeros((N + 1, N + 1))
    for M in range(N + 1):
        for k in range(M + 1):
            if conv == "plain":
                W[M, k] = 1.0
            elif conv == "binomial":
                W[M, k] = float(math.comb(M, k))
            elif conv == "binomial2":
                W[M, k] = float(math.comb(M, k)) ** 2
            else:
                raise ValueError(conv)
    W.setflags(write=False)
    return W


def _powers(z: np.ndarray, L: int) -> np.ndarray:
    z = np.asarray(z, dtype=complex)
    reps = np.broadcast_to(z[..., None], z.shape + (L,))
    return _ratio_sequence(reps)


def _convolve(u: np.ndarray, v: np.ndarray, conv: str) -> np.ndarray:
    N = u.shape[-1] - 1
    W = _conv_weights(conv, N)
    u, v = np.broadcast_arrays(u, v)
    out = np.empty(u.shape, dtype=complex)
    for M in range(N + 1):
        out[..., M] = np.sum(W[M, : M + 1] * u[..., : M + 1] * v[..., M::-1], axis=-1)
    return out


def _lattice_shells(omega: np.ndarray, seqs: Sequence[np.ndarray], zs: Sequence, conv: str) -> np.ndarray:
    """Shell sums ``S_M`` (last axis) of the lattice described in the module docstring."""
    N = omega.shape[-1] - 1
    acc = None
    for seq, z in zip(seqs, zs):
        L = min(seq.shape[-1] - 1, N)
        term = seq[..., : L + 1] * _powers(z, L)
        full = np.zeros(term.shape[:-1] + (N + 1,), dtype=complex)
        full[..., : L + 1] = term
        acc = full if acc is None else _convolve(acc, full, conv)
    return omega * acc


@lru_cache(maxsize=256)
def _lattice_count(orders: tuple, N: int) -> int:
    """Number of multi-indices with ``m_i <= orders[i]`` and ``sum m_i <= N``."""
    acc = [1] + [0] * N
    for L in orders:
        L = min(L, N)
        acc = [sum(acc[M - k] for k in range(min(L, M) + 1)) for M in range(N + 1)]
    return sum(acc)


def _rising(start: np.ndarray, k: int) -> np.ndarray:
    out = np.ones(np.shape(start))
    for j in range(k):
        out = out * (start + j)
    return out


# -- lattice series object ---------------------------------------------------

@dataclass(frozen=True, eq=False)
class LatticeSeries:
    """A truncated lattice series on joint eigenvalues.

    The lattice is ``m_i <= len(seqs[i]) - 1`` and ``sum m_i <= len(omega) - 1``.
    ``transform``/``inverse_transform`` map eigen-space values back to
    matrices and ``scale`` multiplies the whole sum (eigen array or scalar).
    """

    transform: np.ndarray
    inverse_transform: np.ndarray
    omega: np.ndarray
    seqs: tuple
    zs: tuple
    conv: str
    tail_tol: float = 1e-14
    scale: object = 1.0

    @property
    def n(self) -> int:
        return len(self.seqs)

    @property
    def total_order(self) -> int:
        return self.omega.shape[-1] - 1

    @property
    def index_orders(self) -> tuple:
        return tuple(min(seq.shape[-1] - 1, self.total_order) for seq in self.seqs)

    def shells(self) -> np.ndarray:
        return np.asarray(self.scale)[..., None] * _lattice_shells(self.omega, self.seqs, self.zs, self.conv)

    def eigen_value(self) -> np.ndarray:
        return self.shells().sum(axis=-1)

    def compose(self, eig_values) -> np.ndarray:
        return (self.transform * np.asarray(eig_values)) @ self.inverse_transform

    def matrix(self) -> np.ndarray:
        return self.compose(self.eigen_value())

    def eigen_of(self, M) -> np.ndarray:
        """Eigenvalues of a matrix from the same commuting family."""
        D = self.inverse_transform @ as_cmatrix(M) @ self.transform
        return np.diag(D).copy()

    def _eigen_arg(self, value):
        if value is None:
            return 0.0
        if np.ndim(value) == 2:
            return self.eigen_of(value)
        return np.asarray(value)

    def theta(self, i: int, shift=None) -> "LatticeSeries":
        """Multiply the term of multi-index m by ``m_i + shift`` (shift: scalar, eigen array or matrix)."""
        s = self._eigen_arg(shift)
        seqs = list(self.seqs)
        m = np.arange(seqs[i].shape[-1])
        seqs[i] = seqs[i] * (m + np.asarray(s)[..., None])
        return dataclasses.replace(self, seqs=tuple(seqs))

    def theta_total(self, shift=None) -> "LatticeSeries":
        """Multiply the term of multi-index m by ``m_1 + ... + m_n + shift``."""
        s = self._eigen_arg(shift)
        M = np.arange(self.omega.shape[-1])
        return dataclasses.replace(self, omega=self.omega * (M + np.asarray(s)[..., None]))

    def scaled(self, factor) -> "LatticeSeries":
        return dataclasses.replace(self, scale=np.asarray(self.scale) * self._eigen_arg(factor))

    def restrict(self, index_orders: Sequence[int], total_order: int) -> "LatticeSeries":
        """Drop every term outside ``m_i <= index_orders[i]``, ``sum m_i <= total_order``."""
        if total_order > self.total_order or any(L > Lo for L, Lo in zip(index_orders, self.index_orders)):
            raise ValueError("restrict can only shrink the lattice")
        seqs = tuple(seq[..., : L + 1] for seq, L in zip(self.seqs, index_orders))
        return dataclasses.replace(self, omega=self.omega[..., : total_order + 1], seqs=seqs)

    def differentiate(self, orders: Sequence[int]) -> "LatticeSeries":
        """Exact partial derivative of the truncated polynomial, ``d^{k_1}/dz_1^{k_1} ...``."""
        orders = tuple(int(k) for k in orders)
        K = sum(orders)
        if K > self.total_order or any(k > L for k, L in zip(orders, self.index_orders)):
            raise ValueError("derivative order exceeds the truncation")
        Mp = np.arange(self.total_order - K + 1)
        omega = self.omega[..., K:]
        # rewrite kappa(M'+K; m'+k) * prod (m'+k)!/m'! as kappa(M'; m') times shell and index factors
        if self.conv == "binomial":
            omega = omega * _rising(Mp + 1.0, K)
        elif self.conv == "binomial2":
            omega = omega * _rising(Mp + 1.0, K) ** 2
        seqs = []
        for seq, k in zip(self.seqs, orders):
            shifted = seq[..., k:]
            mp = np.arange(shifted.shape[-1]) + 1.0
            if self.conv == "plain":
                shifted = shifted * _rising(mp, k)
            elif self.conv == "binomial2":
                shifted = shifted / _rising(mp, k)
            seqs.append(shifted)
        return dataclasses.replace(self, omega=omega, seqs=tuple(seqs))

    def terms(self) -> int:
        return _lattice_count(self.index_orders, self.total_order)

    def evaluate(self) -> Evaluation:
        sh = self.shells()
        value = self.compose(sh.sum(axis=-1))
        last = min(self.total_order, sum(self.index_orders))
        tail = float(np.linalg.norm(self.compose(sh[..., last])))
        norm = float(np.linalg.norm(value))
        truncated = bool(tail > self.tail_tol * max(1.0, norm))
        return Evaluation(value, self.terms(), tail, truncated)


def theta_apply(series: LatticeSeries, i: int, shift=None) -> LatticeSeries:
    """Euler operator ``z_i d/dz_i`` (optionally plus ``shift``) on a truncated series."""
    return series.theta(i, shift)


# -- ILMF construction ---------------------------------------------------------

def check_guard(family: str, z_list, z_guard: float) -> None:
    """Raise :class:`GuardViolation` outside the scaled Lauricella convergence region."""
    mags = np.abs(np.asarray(z_list, dtype=complex))
    if family == "A":
        ok = mags.sum() <= z_guard
        rule = "sum |z_i|"
    elif family == "D":
        ok = mags.max() <= z_guard
        rule = "max |z_i|"
    elif family == "C":
        ok = np.sqrt(mags).sum() <= math.sqrt(z_guard)
        rule = "sum sqrt|z_i| (against sqrt of the guard)"
    else:
        raise InputError(f"unknown family {family!r}")
    if not ok:
        raise GuardViolation(f"family {family}: {rule} exceeds the guard {z_guard}")


def _family_parts(family, kind, a, x, bs, cs, N, L):
    """(omega, per-index sequences, convolution kind) for one ILMF on eigen arrays."""
    sym = symbol_sequence(kind, a, x, N)
    m = np.arange(L)
    M = np.arange(N)
    if family == "A":
        for k, c in enumerate(cs):
            _check_shift_safe(c, L, f"C_{k + 1}")
        seqs = [_ratio_sequence((b[..., None] + m) / (c[..., None] + m)) for b, c in zip(bs, cs)]
        return sym, seqs, "binomial"
    if family == "C":
        (b,) = bs
        for k, c in enumerate(cs):
            _check_shift_safe(c, L, f"C_{k + 1}")
        omega = sym * _ratio_sequence((b[..., None] + M) / (M + 1.0))
        seqs = [_ratio_sequence((m + 1.0) / (c[..., None] + m)) for c in cs]
        return omega, seqs, "binomial2"
    if family == "D":
        (c,) = cs
        _check_shift_safe(c, N, "C")
        omega = sym * _ratio_sequence((M + 1.0) / (c[..., None] + M))
        seqs = [_ratio_sequence((b[..., None] + m) / (m + 1.0)) for b in bs]
        return omega, seqs, "plain"
    raise InputError(f"unknown family {family!r}")


def _joint_eigen(params: IlmfParams):
    mats = [params.A, *params.B_list, *params.C_list]
    fam = simultaneous_diagonalize(mats)
    eig = [fam.eigenvalues(k) for k in range(len(mats))]
    nb = len(params.B_list)
    return fam, eig[0], eig[1: 1 + nb], eig[1 + nb:]


def ilmf_series(params: IlmfParams, policy: SeriesPolicy | None = None, check: bool = True) -> LatticeSeries:
    """The truncated lattice of an ILMF (or its complete Lauricella limit)."""
    policy = policy or SeriesPolicy()
    if check:
        check_guard(params.family, params.z_list, policy.z_guard)
    fam, a, bs, cs = _joint_eigen(params)
    N = policy.max_total_order
    L = min(policy.max_order_per_index, N)
    if params.kind != "complete" and np.any(a.real <= 0):
        raise NotPositiveStable("A must be positive stable for the incomplete kinds")
    omega, seqs, conv = _family_parts(params.family, params.kind, a, params.x, bs, cs, N, L)
    return LatticeSeries(fam.transform, fam.inverse_transform, omega, tuple(seqs),
                         tuple(np.complex128(z) for z in params.z_list), conv, policy.tail_tol)


def _finish(series: LatticeSeries) -> Evaluation:
    ev = series.evaluate()
    if ev.tail_estimate > _DIVERGENCE_RATIO * max(1.0, float(np.linalg.norm(ev.value))):
        raise NoConvergence(f"series not converged at the truncation caps (last shell norm {ev.tail_estimate:.3e})")
    return ev


def ilmf(params: IlmfParams, policy: SeriesPolicy | None = None) -> Evaluation:
    """Evaluate ``gamma_F^{(n)}``, ``Gamma_F^{(n)}`` or ``F^{(n)}`` for family F in {A, C, D}."""
    return _finish(ilmf_series(params, policy))


# -- one-variable and confluent kernels ----------------------------------------

def _adaptive_kernel(build, tail_tol: float, start: int = _KERNEL_START_ORDER) -> tuple[np.ndarray, int, float, bool]:
    """Grow the order of an entire-function series until its last shell is negligible.

    ``build(N)`` returns shell sums with ``N`` on the last axis.  Returns the
    eigen-space sum, final order, relative tail and a truncation flag.
    """
    N = start
    while True:
        sh = build(N)
        total = sh.sum(axis=-1)
        scale = np.maximum(np.abs(total), 1e-300)
        tail_rel = float(np.max(np.abs(sh[..., -1]) / scale))
        tail_rel = max(tail_rel, float(np.max(np.abs(sh[..., -2]) / scale)))
        if tail_rel <= tail_tol or N >= _KERNEL_MAX_ORDER:
            return total, N, tail_rel, tail_rel > tail_tol
        N *= 2


def _kernel_eval(mats, build, n_vars: int, tail_tol: float) -> Evaluation:
    fam = simultaneous_diagonalize(mats)
    eig = [fam.eigenvalues(k) for k in range(len(mats))]
    total, N, tail_rel, truncated = _adaptive_kernel(lambda N: build(eig, N), tail_tol)
    value = fam.compose(total)
    if truncated and tail_rel > _DIVERGENCE_RATIO:
        raise NoConvergence("kernel series did not converge within the order cap")
    tail = tail_rel * float(np.linalg.norm(value))
    return Evaluation(value, _lattice_count((N,) * n_vars, N), tail, truncated)


def _hyp1f1_shells(b, c, z, N):
    m = np.arange(N)
    _check_shift_safe(c, N, "C")
    seq = _ratio_sequence((b[..., None] + m) / ((c[..., None] + m) * (m + 1.0)))
    return _lattice_shells(np.ones(seq.shape), [seq], [z], "plain")


def _hyp0f1_shells(c, z, N):
    m = np.arange(N)
    _check_shift_safe(c, N, "C")
    seq = _ratio_sequence(1.0 / ((c[..., None] + m) * (m + 1.0)))
    return _lattice_shells(np.ones(seq.shape), [seq], [z], "plain")


def hyp1f1(B, C, z: complex, policy: SeriesPolicy | None = None) -> Evaluation:
    """Confluent hypergeometric matrix function ``1F1(B; C; z)``; entire in ``z``."""
    tol = (policy or SeriesPolicy()).tail_tol
    z = complex(z)
    return _kernel_eval([B, C], lambda e, N: _hyp1f1_shells(e[0], e[1], z, N), 1, tol)


def hyp0f1(C, z: complex, policy: SeriesPolicy | None = None) -> Evaluation:
    """``0F1(-; C; z)``; entire in ``z``."""
    tol = (policy or SeriesPolicy()).tail_tol
    z = complex(z)
    return _kernel_eval([C], lambda e, N: _hyp0f1_shells(e[0], z, N), 1, tol)


def inc_gauss_2f1(kind: str, A, x: float | None, B, C, z: complex,
                  policy: SeriesPolicy | None = None) -> Evaluation:
    """Incomplete Gauss matrix functions ``2gamma1`` (lower) and ``2Gamma1`` (upper)."""
    policy = policy or SeriesPolicy()
    z = complex(z)
    if abs(z) > policy.z_guard:
        raise GuardViolation(f"|z| = {abs(z):.3g} exceeds the guard {policy.z_guard}")
    params = IlmfParams("A", kind, A, x, (B,), (C,), (z,))
    single = SeriesPolicy(policy.max_total_order, policy.max_total_order, policy.tail_tol, policy.z_guard)
    return _finish(ilmf_series(params, single, check=False))


def inc_confluent_1g1(kind: str, A, x: float | None, C, z: complex,
                      policy: SeriesPolicy | None = None) -> Evaluation:
    """Incomplete confluent matrix functions ``1gamma1`` / ``1Gamma1`` (``kind="complete"`` gives 1F1)."""
    tol = (policy or SeriesPolicy()).tail_tol
    z = complex(z)
    if kind != "complete" and not (x is not None and x > 0):
        raise InputError("x: incomplete kinds need x > 0")

    def build(e, N):
        a, c = e
        if kind != "complete" and np.any(a.real <= 0):
            raise NotPositiveStable("A must be positive stable")
        return _eigen_1g1_shells(kind, a, x, c, z, N)

    return _kernel_eval([A, C], build, 1, tol)


def _eigen_1g1_shells(kind, a, x, c, w, N):
    M = np.arange(N)
    _check_shift_safe(c, N, "C")
    omega = symbol_sequence(kind, a, x, N) * _ratio_sequence((M + 1.0) / (c[..., None] + M))
    # omega carries P_M / (c)_M; the remaining 1/M! sits in the per-index sequence
    seq = _ratio_sequence(np.broadcast_to(1.0 / (M + 1.0), np.shape(omega)[:-1] + (N,)))
    return _lattice_shells(omega, [seq], [w], "plain")


def _psi2_shells(b, cs, ws, N):
    M = np.arange(N)
    omega = _ratio_sequence((b[..., None] + M) / (M + 1.0))
    seqs = []
    for c in cs:
        _check_shift_safe(c, N, "C")
        seqs.append(_ratio_sequence(1.0 / (c[..., None] + M)))
    return _lattice_shells(omega, seqs, ws, "binomial")


def _phi2_shells(bs, c, ws, N):
    M = np.arange(N)
    _check_shift_safe(c, N, "C")
    omega = _ratio_sequence(1.0 / (c[..., None] + M))
    seqs = [_ratio_sequence((b[..., None] + M) / (M + 1.0)) for b in bs]
    return _lattice_shells(omega, seqs, ws, "plain")


def _one_variable_series(mats, coeffs, z, order: int, tail_tol: float) -> LatticeSeries:
    fam = simultaneous_diagonalize(mats)
    eig = [fam.eigenvalues(k) for k in range(len(mats))]
    seq = coeffs(eig, order)
    return LatticeSeries(fam.transform, fam.inverse_transform, np.ones(seq.shape, dtype=complex),
                         (seq,), (np.complex128(z),), "plain", tail_tol)


def hyp1f1_series(B, C, z: complex, order: int = 60, tail_tol: float = 1e-14) -> LatticeSeries:
    """Degree-``order`` truncation of ``1F1(B; C; z)`` as a lattice series (for theta operators)."""
    def coeffs(e, N):
        b, c = e
        _check_shift_safe(c, N, "C")
        m = np.arange(N)
        return _ratio_sequence((b[..., None] + m) / ((c[..., None] + m) * (m + 1.0)))
    return _one_variable_series([B, C], coeffs, z, order, tail_tol)


def hyp0f1_series(C, z: complex, order: int = 60, tail_tol: float = 1e-14) -> LatticeSeries:
    """Degree-``order`` truncation of ``0F1(-; C; z)`` as a lattice series."""
    def coeffs(e, N):
        (c,) = e
        _check_shift_safe(c, N, "C")
        m = np.arange(N)
        return _ratio_sequence(1.0 / ((c[..., None] + m) * (m + 1.0)))
    return _one_variable_series([C], coeffs, z, order, tail_tol)


def _confluent_guard(z_list):
    if np.max(np.abs(np.asarray(z_list, dtype=complex))) > _CONFLUENT_Z_MAX:
        raise GuardViolation(f"confluent kernels are limited to |z_i| <= {_CONFLUENT_Z_MAX}")


def confluent_psi2(B, C_list, z_list, policy: SeriesPolicy | None = None) -> Evaluation:
    """``Psi_2^{(n)}[B; C_1..C_n; z]`` = sum (B)_M prod (C_i)^{-1}_{m_i} z_i^{m_i} / m_i!."""
    tol = (policy or SeriesPolicy()).tail_tol
    z_list = [complex(z) for z in z_list]
    if len(C_list) != len(z_list):
        raise InputError("C_list and z_list must have the same length")
    _confluent_guard(z_list)
    return _kernel_eval([B, *C_list], lambda e, N: _psi2_shells(e[0], e[1:], z_list, N), len(z_list), tol)


def confluent_phi2(B_list, C, z_list, policy: SeriesPolicy | None = None) -> Evaluation:
    """``Phi_2^{(n)}[B_1..B_n; C; z]`` = sum prod (B_i)_{m_i} (C)^{-1}_M z_i^{m_i} / m_i!."""
    tol = (policy or SeriesPolicy()).tail_tol
    z_list = [complex(z) for z in z_list]
    if len(B_list) != len(z_list):
        raise InputError("B_list and z_list must have the same length")
    _confluent_guard(z_list)
    return _kernel_eval([*B_list, C], lambda e, N: _phi2_shells(e[:-1], e[-1], z_list, N), len(z_list), tol)


# -- eigen-level kernels for quadrature integrands -----------------------------

def eigen_psi2(b, cs, ws, tail_tol: float = 1e-15) -> np.ndarray:
    """Psi_2 at eigenvalues ``b``, ``cs`` and (broadcast) arrays of arguments ``ws``."""
    b = np.asarray(b, dtype=complex)
    cs = [np.asarray(c, dtype=complex) for c in cs]
    ws = [np.asarray(w, dtype=complex) for w in ws]
    total, *_ = _adaptive_kernel(lambda N: _psi2_shells(b, cs, ws, N), tail_tol)
    return total


def eigen_phi2(bs, c, ws, tail_tol: float = 1e-15) -> np.ndarray:
    """Phi_2 at eigenvalues ``bs``, ``c`` and (broadcast) arrays of arguments ``ws``."""
    bs = [np.asarray(b, dtype=complex) for b in bs]
    c = np.asarray(c, dtype=complex)
    ws = [np.asarray(w, dtype=complex) for w in ws]
    total, *_ = _adaptive_kernel(lambda N: _phi2_shells(bs, c, ws, N), tail_tol)
    return total
