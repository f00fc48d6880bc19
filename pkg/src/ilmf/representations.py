"""Integral representations of the upper ILMFs, evaluated by quadrature.

Each function returns the matrix value of one representation for the
parameters in an :class:`~ilmf.series.IlmfParams` (kind ``upper``).  All
integrands are evaluated on joint eigenvalues and recombined once.  The outer
``t`` (or ``s``) integral over ``[x, inf)`` is adaptive; inner integrals over
``[0, inf)`` with weight ``e^{-s} s^{b-1}`` use generalized Gauss-Laguerre
rules.

The corollary variants take the parameters of the *series* side, for example
``B_i = -m_i I`` and ``C_i + I`` for the Laguerre form, and rebuild the
integrand parameters from them.
"""
from __future__ import annotations

import math

import numpy as np
from scipy import special

from .errors import InputError
from .linalg import simultaneous_diagonalize
from .matrix_special import laguerre_eigen
from .quadrature import QuadSpec, inc_1g1_eigen, laguerre_rule, pfq_eigen, semi_infinite_quad
from .series import IlmfParams, check_guard, eigen_phi2, eigen_psi2

__all__ = [
    "rep_gamma_A",
    "rep_gamma_A_multi",
    "rep_corollaries_A",
    "rep_gamma_C",
    "rep_gamma_C_double",
    "rep_corollaries_C",
    "rep_gamma_D",
    "rep_gamma_D_multi",
    "rep_gamma_D_via_1g1",
    "rep_corollaries_D",
    "representations",
    "COROLLARY_VARIANTS",
]

COROLLARY_VARIANTS = {
    "A": ("laguerre", "lower_gamma", "bessel_J", "bessel_I"),
    "C": ("bessel_J", "bessel_I"),
    "D": ("bessel_J", "bessel_I"),
}
_INNER_ORDER = 48
_MULTI_SPEC = QuadSpec(rel_tol=1e-8, abs_tol=1e-11)


class _Eigen:
    """Joint eigenvalues of (A, B..., C...) for one parameter set."""

    def __init__(self, params: IlmfParams, family: str, max_n: int | None = None):
        if params.family != family:
            raise InputError(f"expected family {family} parameters, got {params.family}")
        if params.kind != "upper":
            raise InputError("integral representations are stated for the upper kind")
        if max_n is not None and params.n > max_n:
            raise InputError(f"this representation is implemented for n <= {max_n}")
        mats = [params.A, *params.B_list, *params.C_list]
        fam = simultaneous_diagonalize(mats)
        eig = [fam.eigenvalues(k) for k in range(len(mats))]
        nb = len(params.B_list)
        self.family = fam
        self.a = eig[0]
        self.bs = eig[1: 1 + nb]
        self.cs = eig[1 + nb:]
        self.zs = [complex(z) for z in params.z_list]
        self.x = params.x

    def compose(self, values) -> np.ndarray:
        return self.family.compose(values)

    def outer_weight(self, t: np.ndarray, power) -> np.ndarray:
        """``e^{-t} t^{power - 1}`` with nodes on axis 0 and eigenvalues on axis 1."""
        return np.exp(-t[:, None] + (np.asarray(power)[None, :] - 1.0) * np.log(t)[:, None])

    def shift(self, *powers) -> float:
        return max(float(np.max(np.real(p))) for p in powers)


def _rg(v):
    return special.rgamma(np.asarray(v, dtype=complex))


def _require_real(values, what: str):
    for v in values:
        if np.any(np.abs(np.imag(v)) > 1e-12):
            raise InputError(f"{what} must have real eigenvalues for this representation")


# -- family A ------------------------------------------------------------------

def rep_gamma_A(params: IlmfParams, spec: QuadSpec | None = None) -> np.ndarray:
    """Single integral over ``[x, inf)`` with a product of ``1F1`` factors."""
    check_guard("A", params.z_list, 0.5)
    e = _Eigen(params, "A")

    def f(t):
        out = e.outer_weight(t, e.a)
        for b, c, z in zip(e.bs, e.cs, e.zs):
            out = out * pfq_eigen([b], [c], z * t[:, None])
        return out

    val = semi_infinite_quad(f, e.x, spec, shift=e.shift(e.a))
    return e.compose(_rg(e.a) * val)


def _inner_0f1(b, c, zt, order: int = _INNER_ORDER) -> np.ndarray:
    """``int_0^inf e^{-s} s^{b-1} 0F1(-; c; zt * s) ds`` per node and eigenvalue; zt has shape (K, r)."""
    nodes, weights = laguerre_rule(b, order)
    vals = pfq_eigen([], [c[None, :, None]], zt[:, :, None] * nodes[None, :, :])
    return np.einsum("krq,rq->kr", vals, weights)


def rep_gamma_A_multi(params: IlmfParams, spec: QuadSpec | None = None) -> np.ndarray:
    """Iterated integral over ``t`` and one ``s_i`` per variable with ``0F1`` factors."""
    check_guard("A", params.z_list, 0.5)
    e = _Eigen(params, "A", max_n=2)
    spec = spec or _MULTI_SPEC

    def f(t):
        out = e.outer_weight(t, e.a)
        for b, c, z in zip(e.bs, e.cs, e.zs):
            out = out * _inner_0f1(b, c, z * t[:, None] * np.ones_like(b)[None, :])
        return out

    val = semi_infinite_quad(f, e.x, spec, shift=e.shift(e.a))
    scale = _rg(e.a)
    for b in e.bs:
        scale = scale * _rg(b)
    return e.compose(scale * val)


def _negative_integer_degree(b: np.ndarray) -> int:
    m = -b[0].real
    if not (abs(m - round(m)) < 1e-12 and round(m) >= 0 and np.allclose(b, b[0], atol=1e-12)):
        raise InputError("the Laguerre form needs B_i = -m_i I with m_i a non-negative integer")
    return int(round(m))


def _real_positive(values, what: str) -> list:
    out = []
    for v in values:
        if abs(v.imag) > 1e-15 or not v.real > 0:
            raise InputError(f"{what} must be real and positive for this representation")
        out.append(v.real)
    return out


def _bessel(variant: str):
    if variant == "bessel_J":
        return special.jv, -1.0
    if variant == "bessel_I":
        return special.iv, 1.0
    raise InputError(f"unknown Bessel variant {variant!r}")


def rep_corollaries_A(variant: str, params: IlmfParams, spec: QuadSpec | None = None) -> np.ndarray:
    """Laguerre, lower-gamma and Bessel special cases of the family-A representations."""
    check_guard("A", params.z_list, 0.5)
    if variant not in COROLLARY_VARIANTS["A"]:
        raise InputError(f"variant must be one of {COROLLARY_VARIANTS['A']}")
    e = _Eigen(params, "A", max_n=2)
    if variant == "laguerre":
        degrees = [_negative_integer_degree(b) for b in e.bs]
        alphas = [c - 1.0 for c in e.cs]

        def f(t):
            out = e.outer_weight(t, e.a)
            for m, al, z in zip(degrees, alphas, e.zs):
                out = out * laguerre_eigen(al[None, :], m, z * t[:, None])
            return out

        val = semi_infinite_quad(f, e.x, spec, shift=e.shift(e.a))
        scale = _rg(e.a)
        for m, al in zip(degrees, alphas):
            scale = scale * math.factorial(m) * np.exp(special.loggamma(al + 1.0) - special.loggamma(al + 1.0 + m))
        return e.compose(scale * val)

    if variant == "lower_gamma":
        # the series side has C_i = B_i + I and arguments -zeta_i
        for b, c in zip(e.bs, e.cs):
            if not np.allclose(c, b + 1.0, atol=1e-10):
                raise InputError("the lower-gamma form needs C_i = B_i + I")
        _require_real(e.bs, "B_i")
        zetas = _real_positive([-z for z in e.zs], "-z_i")
        bsum = sum(e.bs)

        def f(t):
            out = e.outer_weight(t, e.a - bsum)
            for b, zeta in zip(e.bs, zetas):
                br = b.real[None, :]
                out = out * special.gammainc(br, zeta * t[:, None]) * special.gamma(br)
            return out

        val = semi_infinite_quad(f, e.x, spec, shift=e.shift(e.a))
        scale = _rg(e.a)
        for b, zeta in zip(e.bs, zetas):
            scale = scale * b * np.exp(-b * math.log(zeta))
        return e.compose(scale * val)

    # Bessel forms: series side has C_i + I and arguments -+zeta_i
    fn, sign = _bessel(variant)
    _require_real(e.cs, "C_i")
    orders = [c.real - 1.0 for c in e.cs]
    zetas = _real_positive([sign * z for z in e.zs], "the Bessel argument")
    spec = spec or _MULTI_SPEC
    csum = sum(orders)

    def f(t):
        out = e.outer_weight(t, e.a - 0.5 * csum)
        for b, nu, zeta in zip(e.bs, orders, zetas):
            nodes, weights = laguerre_rule(b)
            arg = 2.0 * np.sqrt(zeta * t[:, None, None] * nodes[None, :, :])
            g = np.exp(-0.5 * nu[None, :, None] * np.log(nodes)) * fn(nu[None, :, None], arg)
            out = out * np.einsum("krq,rq->kr", g, weights)
        return out

    val = semi_infinite_quad(f, e.x, spec, shift=e.shift(e.a))
    scale = _rg(e.a)
    for b, nu, zeta in zip(e.bs, orders, zetas):
        scale = scale * _rg(b) * special.gamma(nu + 1.0) * np.exp(-0.5 * nu * math.log(zeta))
    return e.compose(scale * val)


# -- family C ------------------------------------------------------------------

def rep_gamma_C(params: IlmfParams, spec: QuadSpec | None = None) -> np.ndarray:
    """Single integral over ``[x, inf)`` with the confluent ``Psi_2`` kernel."""
    check_guard("C", params.z_list, 0.5)
    e = _Eigen(params, "C")
    (b,) = e.bs

    def f(t):
        ws = [z * t[:, None] for z in e.zs]
        return e.outer_weight(t, e.a) * eigen_psi2(b[None, :], [c[None, :] for c in e.cs], ws)

    val = semi_infinite_quad(f, e.x, spec, shift=e.shift(e.a))
    return e.compose(_rg(e.a) * val)


def rep_gamma_C_double(params: IlmfParams, spec: QuadSpec | None = None) -> np.ndarray:
    """Double integral over ``t`` and a shared ``s`` with a product of ``0F1`` factors."""
    check_guard("C", params.z_list, 0.5)
    e = _Eigen(params, "C", max_n=3)
    (b,) = e.bs
    spec = spec or _MULTI_SPEC
    nodes, weights = laguerre_rule(b)

    def f(t):
        inner = np.ones((len(t),) + nodes.shape, dtype=complex)
        for c, z in zip(e.cs, e.zs):
            inner = inner * pfq_eigen([], [c[None, :, None]], z * t[:, None, None] * nodes[None])
        return e.outer_weight(t, e.a) * np.einsum("krq,rq->kr", inner, weights)

    val = semi_infinite_quad(f, e.x, spec, shift=e.shift(e.a))
    return e.compose(_rg(e.a) * _rg(b) * val)


def rep_corollaries_C(variant: str, params: IlmfParams, spec: QuadSpec | None = None) -> np.ndarray:
    """Bessel special cases of the family-C double integral (series side has ``C_i + I``)."""
    check_guard("C", params.z_list, 0.5)
    e = _Eigen(params, "C", max_n=3)
    fn, sign = _bessel(variant)
    (b,) = e.bs
    _require_real(e.cs, "C_i")
    orders = [c.real - 1.0 for c in e.cs]
    zetas = _real_positive([sign * z for z in e.zs], "the Bessel argument")
    csum = sum(orders)
    spec = spec or _MULTI_SPEC
    nodes, weights = laguerre_rule(b)

    def f(t):
        g = np.exp(-0.5 * csum[None, :, None] * np.log(nodes))
        for nu, zeta in zip(orders, zetas):
            g = g * fn(nu[None, :, None], 2.0 * np.sqrt(zeta * t[:, None, None] * nodes[None]))
        return e.outer_weight(t, e.a - 0.5 * csum) * np.einsum("krq,rq->kr", g, weights)

    val = semi_infinite_quad(f, e.x, spec, shift=e.shift(e.a))
    scale = _rg(e.a) * _rg(b)
    for nu, zeta in zip(orders, zetas):
        scale = scale * special.gamma(nu + 1.0) * np.exp(-0.5 * nu * math.log(zeta))
    return e.compose(scale * val)


# -- family D ------------------------------------------------------------------

def rep_gamma_D(params: IlmfParams, spec: QuadSpec | None = None) -> np.ndarray:
    """Single integral over ``[x, inf)`` with the confluent ``Phi_2`` kernel."""
    check_guard("D", params.z_list, 0.5)
    e = _Eigen(params, "D")
    (c,) = e.cs

    def f(t):
        ws = [z * t[:, None] for z in e.zs]
        return e.outer_weight(t, e.a) * eigen_phi2([b[None, :] for b in e.bs], c[None, :], ws)

    val = semi_infinite_quad(f, e.x, spec, shift=e.shift(e.a))
    return e.compose(_rg(e.a) * val)


def _tensor_laguerre(bs, order: int):
    """Tensor-product nodes (list of (r, Q^n) arrays) and weights (r, Q^n) for several ``b_i``."""
    rules = [laguerre_rule(b, order) for b in bs]
    nodes = []
    weights = 1.0
    q = order
    n = len(bs)
    for i, (x, w) in enumerate(rules):
        shape = [1] * n
        shape[i] = q
        xi = np.broadcast_to(x.reshape((x.shape[0],) + tuple(shape)), (x.shape[0],) + (q,) * n)
        wi = w.reshape((w.shape[0],) + tuple(shape))
        nodes.append(xi.reshape(x.shape[0], -1))
        weights = weights * wi
    weights = np.broadcast_to(weights, (rules[0][0].shape[0],) + (q,) * n).reshape(rules[0][0].shape[0], -1)
    return nodes, weights


def rep_gamma_D_via_1g1(params: IlmfParams, order: int = _INNER_ORDER) -> np.ndarray:
    """Integral over ``t_1..t_n`` in ``[0, inf)`` of the incomplete confluent kernel."""
    check_guard("D", params.z_list, 0.5)
    e = _Eigen(params, "D", max_n=2)
    _require_real([e.a], "A")
    (c,) = e.cs
    nodes, weights = _tensor_laguerre(e.bs, order)
    w = sum(z * t for z, t in zip(e.zs, nodes)).T  # (Q^n, r)
    vals = inc_1g1_eigen(e.a, e.x, c, w)
    total = np.einsum("qr,rq->r", vals, weights)
    for b in e.bs:
        total = total * _rg(b)
    return e.compose(total)


def rep_gamma_D_multi(params: IlmfParams, spec: QuadSpec | None = None, order: int = 32) -> np.ndarray:
    """Integral over ``s`` in ``[x, inf)`` and ``t_1..t_n`` in ``[0, inf)`` with a ``0F1`` kernel."""
    check_guard("D", params.z_list, 0.5)
    e = _Eigen(params, "D", max_n=2)
    (c,) = e.cs
    spec = spec or _MULTI_SPEC
    nodes, weights = _tensor_laguerre(e.bs, order)
    u = sum(z * t for z, t in zip(e.zs, nodes))  # (r, Q^n)

    def f(s):
        vals = pfq_eigen([], [c[None, :, None]], s[:, None, None] * u[None])
        return e.outer_weight(s, e.a) * np.einsum("krq,rq->kr", vals, weights)

    val = semi_infinite_quad(f, e.x, spec, shift=e.shift(e.a))
    scale = _rg(e.a)
    for b in e.bs:
        scale = scale * _rg(b)
    return e.compose(scale * val)


def rep_corollaries_D(variant: str, params: IlmfParams, spec: QuadSpec | None = None,
                      order: int = 32) -> np.ndarray:
    """Bessel special cases of the family-D triple integral (series side has ``C + I``)."""
    check_guard("D", params.z_list, 0.5)
    e = _Eigen(params, "D", max_n=2)
    fn, sign = _bessel(variant)
    (c,) = e.cs
    _require_real([c], "C")
    nu = c.real - 1.0
    zetas = _real_positive([sign * z for z in e.zs], "the Bessel argument")
    spec = spec or _MULTI_SPEC
    nodes, weights = _tensor_laguerre(e.bs, order)
    u = sum(zeta * t for zeta, t in zip(zetas, nodes))  # (r, Q^n), positive

    def f(s):
        arg = 2.0 * np.sqrt(s[:, None, None] * u[None])
        g = np.exp(-0.5 * nu[None, :, None] * np.log(u)) * fn(nu[None, :, None], arg)
        return e.outer_weight(s, e.a - 0.5 * nu) * np.einsum("krq,rq->kr", g, weights)

    val = semi_infinite_quad(f, e.x, spec, shift=e.shift(e.a))
    scale = _rg(e.a) * special.gamma(nu + 1.0)
    for b in e.bs:
        scale = scale * _rg(b)
    return e.compose(scale * val)


def representations(params: IlmfParams, spec: QuadSpec | None = None) -> dict:
    """Every applicable quadrature representation for ``params`` (name -> matrix)."""
    out = {}
    if params.family == "A":
        out["single_integral"] = rep_gamma_A(params, spec)
        if params.n <= 2:
            out["multi_integral"] = rep_gamma_A_multi(params)
    elif params.family == "C":
        out["single_integral"] = rep_gamma_C(params, spec)
        if params.n <= 3:
            out["double_integral"] = rep_gamma_C_double(params)
    else:
        out["single_integral"] = rep_gamma_D(params, spec)
        if params.n <= 2:
            if np.all(np.abs(np.linalg.eigvals(params.A).imag) < 1e-12):
                out["confluent_1g1_integral"] = rep_gamma_D_via_1g1(params)
            out["multi_integral"] = rep_gamma_D_multi(params)
    return out
