"""Numeric oracles for the weighted bubble integrals.

Two independent routes per F-integral:

  * poisson_physical: integrate the defining (r, xN) double integral
    with the extension evaluated through its Poisson-kernel convolution
    (vectorized Gauss-Legendre; no Fourier ingredients).  Target 1e-3
    relative.
  * fourier_fd: integrate the Fourier-side pairing with the iterated
    radial Laplacian realized by fourth-order finite differences of the
    numerically evaluated profile product (no term rewriting).  Target
    1e-6 relative.

Both report a refinement-based error estimate alongside the value.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

try:
    from scipy.special import kv as _kv
except ImportError:  # pragma: no cover
    _kv = None
    import mpmath

from .fourier import FIntegralKey
from .profiles import BubbleEvaluator, constants, sphere_measure


@dataclass
class OracleValue:
    value: float
    error_estimate: float
    method: str


def _kv_arr(order: float, x: np.ndarray) -> np.ndarray:
    if _kv is not None:
        return _kv(order, x)
    return np.vectorize(lambda t: float(mpmath.besselk(order, t)))(x)


def _gl(n_nodes: int, a: float, b: float):
    x, w = np.polynomial.legendre.leggauss(n_nodes)
    return 0.5 * (b - a) * x + 0.5 * (a + b), 0.5 * (b - a) * w


def _grid_power_mapped(n_nodes: int, a: float, b: float, k: int):
    """Nodes/weights for int_a^b f(u) du with u = a + (b-a) w^k, w in (0,1)."""
    x, wts = _gl(n_nodes, 0.0, 1.0)
    u = a + (b - a) * x**k
    return u, wts * (b - a) * k * x ** (k - 1)


class _ProfileEval:
    """Vectorized profile-product evaluation on float64 grids."""

    def __init__(self, n: int, gamma: float):
        self.n = n
        self.gamma = float(gamma)
        c = constants(n, gamma)
        self.d1 = c.d1
        self.d2 = c.d2

    def phi(self, t: np.ndarray) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        out = np.zeros_like(t)
        mask = (t > 0) & (t < 650)
        tm = t[mask]
        out[mask] = self.d1 * tm**self.gamma * _kv_arr(self.gamma, tm)
        return out

    def phi_prime(self, t: np.ndarray) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        out = np.zeros_like(t)
        mask = (t > 0) & (t < 650)
        tm = t[mask]
        g = self.gamma
        kd = -(_kv_arr(g - 1, tm) + _kv_arr(g + 1, tm)) / 2
        out[mask] = self.d1 * (g * tm ** (g - 1) * _kv_arr(g, tm) + tm**g * kd)
        return out

    def what(self, rho: np.ndarray) -> np.ndarray:
        rho = np.asarray(rho, dtype=float)
        out = np.zeros_like(rho)
        mask = (rho > 0) & (rho < 650)
        rm = rho[mask]
        out[mask] = self.d2 * rm ** (-self.gamma) * _kv_arr(self.gamma, rm)
        return out

    def w_hat(self, rho: np.ndarray, xn: np.ndarray) -> np.ndarray:
        return self.what(rho) * self.phi(rho * xn)

    def v_normal(self, rho: np.ndarray, xn: np.ndarray) -> np.ndarray:
        """dN of w_hat: rho * what(rho) * phi'(rho*xn)."""
        return rho * self.what(rho) * self.phi_prime(rho * xn)


def _lap_fd(pe: _ProfileEval, M: int, rho: np.ndarray, xn: np.ndarray, h: float):
    """(Delta_rad)^M of rho -> w_hat(rho, xn) by 5-point stencils, O(h^4)."""
    if M == 0:
        return pe.w_hat(rho, xn)
    f = lambda x: _lap_fd(pe, M - 1, x, xn, h)
    fp2, fp1, f0, fm1, fm2 = (
        f(rho + 2 * h),
        f(rho + h),
        f(rho),
        f(rho - h),
        f(rho - 2 * h),
    )
    d2 = (-fp2 + 16 * fp1 - 30 * f0 + 16 * fm1 - fm2) / (12 * h * h)
    d1 = (-fp2 + 8 * fp1 - 8 * fm1 + fm2) / (12 * h)
    return d2 + (pe.n - 1) / rho * d1


def _d_rho_fd(fn, rho: np.ndarray, h: float):
    return (-fn(rho + 2 * h) + 8 * fn(rho + h) - 8 * fn(rho - h) + fn(rho - 2 * h)) / (
        12 * h
    )


def _fourier_grid(n: int, gamma: float, alpha: int, n_rho: int, n_u: int, h: float):
    """(rho, u = rho*xN) tensor grid with weights for the Fourier pairing.

    The rho panel starts above 5h so iterated five-point stencils never
    cross zero; the neglected sliver carries weight rho^(n-1-O(1)).
    """
    rho_min = max(0.02, 5.0 * h)
    rho1, wr1 = _gl(max(24, n_rho // 3), rho_min, 1.0)
    rho2, wr2 = _gl(n_rho, 1.0, 45.0)
    rho = np.concatenate([rho1, rho2])
    wr = np.concatenate([wr1, wr2])
    # u-panel [0, 1] with u = w^4 absorbing the xN^(alpha-2g) endpoint
    u1, wu1 = _grid_power_mapped(max(24, n_u // 3), 0.0, 1.0, 4)
    u2, wu2 = _gl(n_u, 1.0, 45.0)
    u = np.concatenate([u1, u2])
    wu = np.concatenate([wu1, wu2])
    return rho, wr, u, wu


def _fourier_fd_value(
    key: FIntegralKey, n: int, gamma: float, n_rho: int, n_u: int, h: float
) -> float:
    pe = _ProfileEval(n, gamma)
    alpha, beta = key.alpha, key.beta
    M = beta // 2
    rho, wr, u, wu = _fourier_grid(n, gamma, alpha, n_rho, n_u, h)
    R = rho[:, None]
    U = u[None, :]
    XN = U / R
    sign_m = -1.0 if M % 2 else 1.0

    if key.kind == 1:
        w0 = pe.w_hat(R * np.ones_like(XN), XN)
        other = sign_m * _lap_fd(pe, M, R * np.ones_like(XN), XN, h)
        core = w0 * other
        rho_pow = n - 1
    elif key.kind == 2:
        w0 = pe.w_hat(R * np.ones_like(XN), XN)
        if beta == 0:
            core = (R**2) * w0 * w0
            rho_pow = n - 1
        else:
            m = M - 1
            sgn = -1.0 if m % 2 else 1.0
            rdr = R * _d_rho_fd(
                lambda x: sgn * _lap_fd(pe, m, x, XN, h), R * np.ones_like(XN), h
            )
            lap_top = (-1.0 if (m + 1) % 2 else 1.0) * _lap_fd(
                pe, m + 1, R * np.ones_like(XN), XN, h
            )
            core = w0 * (-2 * (1 + m) * rdr + R**2 * lap_top)
            rho_pow = n - 1
    elif key.kind == 3:
        # the normal-derivative factor rho * what * phi' is numerically
        # evaluated (K recurrence); only the Laplacians are differenced
        def v_at(rho_s):
            return pe.v_normal(rho_s, XN)

        v0 = v_at(R * np.ones_like(XN))
        other = sign_m * (
            v0 if M == 0 else _lap_fd_of(v_at, pe.n, M, R * np.ones_like(XN), h)
        )
        core = v0 * other
        rho_pow = n - 1
    else:  # kind 4
        a = _fourier_fd_value(FIntegralKey(2, alpha, beta), n, gamma, n_rho, n_u, h)
        b = _fourier_fd_value(FIntegralKey(3, alpha, beta), n, gamma, n_rho, n_u, h)
        return a + b

    # weights: xN^(alpha-2g) rho^(n-1) drho dxN with xN = u/rho
    g = pe.gamma
    weight = XN ** (alpha - 2 * g) * R ** (rho_pow - 1)  # 1/rho from dxN = du/rho
    integrand = core * weight
    val = float(wr @ integrand @ wu)
    return val * sphere_measure(n)


def _lap_fd_of(fn, n: int, M: int, rho: np.ndarray, h: float):
    """(Delta_rad)^M of a vectorized radial function fn(rho)."""
    if M == 0:
        return fn(rho)
    f = lambda x: _lap_fd_of(fn, n, M - 1, x, h)
    fp2, fp1, f0, fm1, fm2 = (
        f(rho + 2 * h),
        f(rho + h),
        f(rho),
        f(rho - h),
        f(rho - 2 * h),
    )
    d2 = (-fp2 + 16 * fp1 - 30 * f0 + 16 * fm1 - fm2) / (12 * h * h)
    d1 = (-fp2 + 8 * fp1 - 8 * fm1 + fm2) / (12 * h)
    return d2 + (n - 1) / rho * d1


def f_integral_fourier_fd(key: FIntegralKey, n: int, gamma: float) -> OracleValue:
    """Fourier-side oracle; finite-differenced Laplacians, beta <= 6."""
    if key.beta > 6:
        raise ValueError("fourier_fd guard: beta <= 6 (at most three FD Laplacians)")
    coarse = _fourier_fd_value(key, n, gamma, 96, 96, 8e-3)
    fine = _fourier_fd_value(key, n, gamma, 144, 144, 4e-3)
    err = abs(fine - coarse) / max(abs(fine), 1e-300)
    return OracleValue(fine, err, "fourier_fd")


# ---------------------------------------------------------------------------
# physical-space (Poisson kernel) route
# ---------------------------------------------------------------------------


def _poisson_value(
    key: FIntegralKey, n: int, gamma: float, nodes: int, be: BubbleEvaluator, delta: float = 1.0
) -> float:
    alpha, beta = key.alpha, key.beta
    g = float(gamma)
    r1, wr1 = _gl(nodes, 0.0, 2.5)
    r2, wr2 = _gl(nodes // 2, 2.5, 25.0)
    r = np.concatenate([r1, r2])
    wr = np.concatenate([wr1, wr2])
    x1, wx1 = _grid_power_mapped(nodes, 0.0, 1.0, 4)
    x2, wx2 = _gl(nodes // 2, 1.0, 25.0)
    xn = np.concatenate([x1, x2])
    wx = np.concatenate([wx1, wx2])
    R, XN = np.meshgrid(r, xn, indexing="ij")
    scale = delta ** (-(n - 2 * g) / 2)
    if key.kind == 1:
        F = (scale * be.w(R / delta, XN / delta)) ** 2
    elif key.kind == 2:
        F = (scale / delta * be.dr(R / delta, XN / delta)) ** 2
    elif key.kind == 3:
        F = (scale / delta * be.dn(R / delta, XN / delta)) ** 2
    else:
        return _poisson_value(FIntegralKey(2, alpha, beta), n, gamma, nodes, be, delta) + (
            _poisson_value(FIntegralKey(3, alpha, beta), n, gamma, nodes, be, delta)
        )
    weight = XN ** (alpha - 2 * g) * R ** (beta + n - 1)
    val = float(wr @ (F * weight) @ wx)
    return val * sphere_measure(n)


def f_integral_poisson(
    key: FIntegralKey, n: int, gamma: float, delta: float = 1.0
) -> OracleValue:
    """Physical-space oracle for modest indices (alpha + beta <= 10)."""
    if key.alpha + key.beta > 10:
        raise ValueError("poisson_physical guard: alpha + beta <= 10")
    be_c = BubbleEvaluator(n, gamma, n_v=90, n_th=48)
    coarse = _poisson_value(key, n, gamma, 64, be_c, delta)
    be_f = BubbleEvaluator(n, gamma, n_v=130, n_th=64)
    fine = _poisson_value(key, n, gamma, 96, be_f, delta)
    err = abs(fine - coarse) / max(abs(fine), 1e-300)
    return OracleValue(fine, err, "poisson_physical")
