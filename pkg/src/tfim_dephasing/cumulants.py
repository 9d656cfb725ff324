"""Truncated decoherence series Gamma(t) = sum_n (2^n/n!) (i g)^n Int C~.

Each order is reduced to a closed-form mode sum (the time integrals of the
cosine kernels are elementary):

    Gamma1(t) = 2 i g t c1
    Gamma2(t) = -g^2  sum_k w_k (1 - cos(2 eps_k t)) / eps_k^2
    Gamma3(t) =  i g^3 sum_k sin^2(2theta_k) (sin x_k - x_k cos x_k) / eps_k^3,
                 x_k = 2 eps_k t

with w_k = (n_k + 1)^2 (= 1 at zero temperature).  The third-order form comes
from splitting the integration cube into its six strict-ordering cells, on
each of which the step brackets are constants.  Both closed forms are checked
against direct Gauss-Legendre quadrature of the kernels; for the third order
the reference rule integrates the literal bracketed kernel numerically, either
cell-by-cell (spectrally accurate) or on a single tensor grid over the cube
(kink-limited, error O(points^-2)).
"""

import math
from dataclasses import dataclass
from functools import lru_cache
from itertools import permutations

import numpy as np

from .correlators import c1, occupation
from .errors import FiniteBetaError, QuadratureConvergenceError
from .model import KGrid, ModelParams

ORDER3_POINTS_CAP = 1024
_CHUNK = 1 << 17


@dataclass(frozen=True)
class CumulantTerms:
    """Per-order contributions to the truncated series at one time."""

    t: float
    gamma1: complex
    gamma2: complex
    gamma3: complex
    truncated_sum: complex


def gamma_order1(params: ModelParams, grid: KGrid, t: float) -> complex:
    """First-order term 2 i g t c1; purely imaginary."""
    return complex(0.0, 2.0 * params.g * t * c1(params, grid).value.real)


def gamma_order2(params: ModelParams, grid: KGrid, t: float) -> complex:
    """Second-order term; real and <= 0."""
    w = (occupation(params.beta, grid.eps) + 1.0) ** 2
    val = -params.g**2 * float(
        np.sum(w * (1.0 - np.cos(2.0 * grid.eps * t)) / grid.eps**2)
    )
    return complex(val, 0.0)


def _order3_mode_sum(grid: KGrid, t: float) -> float:
    x = 2.0 * grid.eps * t
    return float(np.sum(grid.sin2theta**2 * (np.sin(x) - x * np.cos(x)) / grid.eps**3))


def gamma_order3(
    params: ModelParams,
    grid: KGrid,
    t: float,
    quadrature_points: int | None = None,
) -> complex:
    """Third-order term (zero temperature); purely imaginary, scales as g^3.

    With ``quadrature_points`` set, the closed form is validated against the
    numerical cube integral at that resolution (refined until two successive
    refinements agree to 1e-8 relative, capped at ORDER3_POINTS_CAP);
    disagreement raises QuadratureConvergenceError.
    """
    if not params.zero_temperature:
        raise FiniteBetaError("gamma_order3 requires beta = inf")
    value = complex(0.0, params.g**3 * _order3_mode_sum(grid, t))
    if quadrature_points is not None:
        _validate_order3(params, grid, t, value, quadrature_points)
    return value


def _validate_order3(params, grid, t, analytic, points):
    if points < 8:
        raise ValueError(f"quadrature_points must be >= 8, got {points}")
    if t == 0.0 or params.g == 0.0:
        return
    ref = gamma_order3_quadrature(params, grid, t, points)
    p = points
    while True:
        if 2 * p > ORDER3_POINTS_CAP:
            raise QuadratureConvergenceError(
                f"order-3 quadrature not converged below {ORDER3_POINTS_CAP} points at t={t}"
            )
        nxt = gamma_order3_quadrature(params, grid, t, 2 * p)
        if abs(nxt - ref) <= 1e-8 * max(abs(nxt), 1e-300):
            ref = nxt
            break
        ref, p = nxt, 2 * p
    tol = 1e-6 * (128.0 / points) ** 2
    if abs(analytic - ref) > tol * max(abs(ref), 1e-300):
        raise QuadratureConvergenceError(
            f"order-3 closed form and quadrature disagree at t={t}: "
            f"{analytic.imag:.6e} vs {ref.imag:.6e}"
        )


def gamma_series(
    params: ModelParams,
    grid: KGrid,
    times: np.ndarray,
    max_order: int = 3,
) -> list[CumulantTerms]:
    """Evaluate the per-order terms on a time grid; orders above max_order are zero."""
    if max_order not in (1, 2, 3):
        raise ValueError(f"max_order must be 1, 2 or 3, got {max_order}")
    ts = np.asarray(times, dtype=float)
    if ts.ndim != 1 or ts.size == 0:
        raise ValueError("times must be a non-empty 1-D array")
    if ts[0] < 0.0 or np.any(np.diff(ts) <= 0.0):
        raise ValueError("times must be strictly increasing and start at >= 0")

    c1val = c1(params, grid).value.real
    w = (occupation(params.beta, grid.eps) + 1.0) ** 2
    x = 2.0 * np.outer(ts, grid.eps)
    g1 = 2.0 * params.g * c1val * ts
    g2 = -params.g**2 * ((1.0 - np.cos(x)) / grid.eps**2 * w).sum(axis=1)
    if max_order >= 3:
        if not params.zero_temperature:
            raise FiniteBetaError("order 3 requires beta = inf")
        g3 = params.g**3 * (
            (np.sin(x) - x * np.cos(x)) / grid.eps**3 * grid.sin2theta**2
        ).sum(axis=1)
    else:
        g3 = np.zeros_like(ts)

    out = []
    for i, t in enumerate(ts):
        terms = [complex(0.0, g1[i]), complex(g2[i], 0.0), complex(0.0, g3[i])]
        if max_order < 2:
            terms[1] = 0j
        if max_order < 3:
            terms[2] = 0j
        out.append(CumulantTerms(float(t), terms[0], terms[1], terms[2], sum(terms)))
    return out


@lru_cache(maxsize=32)
def _leggauss01(n: int):
    x, w = np.polynomial.legendre.leggauss(n)
    return 0.5 * (x + 1.0), 0.5 * w


def _mode_cos_sum(eps: np.ndarray, weights: np.ndarray, diffs: np.ndarray) -> np.ndarray:
    """sum_k weights_k * cos(2 eps_k d) for every d in diffs, chunked."""
    flat = diffs.reshape(-1)
    out = np.empty_like(flat)
    for i in range(0, flat.size, _CHUNK):
        d = flat[i:i + _CHUNK]
        out[i:i + _CHUNK] = np.cos(2.0 * np.multiply.outer(d, eps)) @ weights
    return out.reshape(diffs.shape)


def gamma_order2_quadrature(
    params: ModelParams, grid: KGrid, t: float, points: int = 64
) -> complex:
    """Reference value of the second order by tensor Gauss-Legendre on [0,t]^2."""
    x01, w01 = _leggauss01(points)
    x = t * x01
    w = t * w01
    weights = (occupation(params.beta, grid.eps) + 1.0) ** 2
    table = _mode_cos_sum(grid.eps, weights, x[:, None] - x[None, :])
    integral = float(np.einsum("i,j,ij->", w, w, table))
    return complex(-2.0 * params.g**2 * integral, 0.0)


def _order3_kernel_brackets(T1, T2, T3):
    """Literal step-function brackets of the third-order kernel."""
    def th(z):
        return (z > 0).astype(float)

    b13 = 1.0 - th(T3 - T1) * th(T1 - T2) - th(T1 - T3) * th(T3 - T2)
    b12 = 1.0 - th(T2 - T1) * th(T1 - T3) - th(T1 - T2) * th(T2 - T3)
    b23 = 1.0 - th(T3 - T2) * th(T2 - T1) - th(T2 - T3) * th(T3 - T1)
    return b13, b12, b23


def gamma_order3_quadrature(
    params: ModelParams,
    grid: KGrid,
    t: float,
    points: int = 64,
    split_orderings: bool = True,
) -> complex:
    """Reference value of the third order by numerical integration over [0,t]^3.

    split_orderings=True integrates the six strict-ordering cells with nested
    variable-limit Gauss-Legendre rules (points per axis per cell) and the
    literal step brackets; the integrand is smooth on each cell, so this
    converges spectrally.  split_orderings=False uses one tensor-product rule
    over the whole cube; the kernel kinks across the ordering boundaries limit
    that variant to O(points^-2) accuracy.
    """
    if not params.zero_temperature:
        raise FiniteBetaError("gamma_order3_quadrature requires beta = inf")
    if points < 2:
        raise ValueError("points must be >= 2")
    eps = grid.eps
    s2sq = grid.sin2theta**2

    if split_orderings:
        u, wu = _leggauss01(points)
        U = u[:, None, None]
        V = u[None, :, None]
        W = u[None, None, :]
        ta = t * U
        tb = ta * V
        tc = tb * W
        jac = t * ta * tb
        wt = wu[:, None, None] * wu[None, :, None] * wu[None, None, :] * jac
        integral = 0.0
        for perm in permutations(range(3)):
            coords = [None, None, None]
            coords[perm[0]], coords[perm[1]], coords[perm[2]] = (
                np.broadcast_arrays(ta, tb, tc)
            )
            T1, T2, T3 = coords
            b13, b12, b23 = _order3_kernel_brackets(T1, T2, T3)
            kern = -(
                b13 * _mode_cos_sum(eps, s2sq, T1 - T3)
                + b12 * _mode_cos_sum(eps, s2sq, T1 - T2)
                + b23 * _mode_cos_sum(eps, s2sq, T2 - T3)
            )
            integral += float(np.sum(wt * kern))
    else:
        x01, w01 = _leggauss01(points)
        x = t * x01
        w = t * w01
        table = _mode_cos_sum(eps, s2sq, x[:, None] - x[None, :])
        n = points
        idx = np.indices((n, n, n))
        stacked = np.stack(np.meshgrid(x, x, x, indexing="ij"))
        m = np.argmin(stacked, axis=0)
        # limiting kernel: the two cosine pairs that contain the minimal time
        total = (
            table[idx[0], idx[1]] + table[idx[0], idx[2]] + table[idx[1], idx[2]]
        )
        omitted = table[
            np.take_along_axis(idx, ((m + 1) % 3)[None], axis=0)[0],
            np.take_along_axis(idx, ((m + 2) % 3)[None], axis=0)[0],
        ]
        kern = -(total - omitted)
        integral = float(np.einsum("i,j,k,ijk->", w, w, w, kern))

    return complex(0.0, -(4.0 / 3.0) * params.g**3 * integral)
