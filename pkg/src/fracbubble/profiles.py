"""Floating-point evaluation of the Bessel-type profiles and the bubble.

The two profile factors of the Fourier-transformed extension are

    phi(t)  = d1 * t^gamma  * K_gamma(t),   d1 = 2^(1-gamma) / Gamma(gamma)
    what(r) = d2 * r^-gamma * K_gamma(r)

with K_gamma the modified Bessel function of the second kind.  This
module evaluates them (and their derivatives through the standard
K recurrences), the closed-form constants, the 1-D profile moments by
adaptive quadrature, and the physical-space extension through its
Poisson-kernel convolution.  All quadrature accumulates in extended
precision (>= 30 significant digits) and the interface exposes floats.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import mpmath

DPS = 30


class BesselDomainError(ValueError):
    pass


class BesselUnderflowError(ArithmeticError):
    """K_gamma(t) underflows double range for t > 700."""


class DivergentIntegralError(ValueError):
    def __init__(self, message: str):
        super().__init__(message)
        self.condition = message


@dataclass
class ProfilePoint:
    phi: float
    phi_prime: float
    what: float
    what_prime: float


@dataclass
class PaperConstants:
    c_ng: float
    p_ng: float
    kappa_gamma: float
    d1: float
    d2: float
    sphere_measure: float


def sphere_measure(n: int) -> float:
    """|S^(n-1)| = 2 pi^(n/2) / Gamma(n/2)."""
    with mpmath.workdps(DPS):
        return float(2 * mpmath.pi ** (mpmath.mpf(n) / 2) / mpmath.gamma(mpmath.mpf(n) / 2))


def constants(n: int, gamma: float) -> PaperConstants:
    if not 0 < gamma < 1:
        raise ValueError("gamma must lie in (0,1)")
    if n <= 2 * gamma:
        raise ValueError("need n > 2*gamma")
    with mpmath.workdps(DPS):
        g = mpmath.mpf(gamma)
        half_plus = (n + 2 * g) / 2
        half_minus = (n - 2 * g) / 2
        c_ng = 2**half_minus * (mpmath.gamma(half_plus) / mpmath.gamma(half_minus)) ** (
            (n - 2 * g) / (4 * g)
        )
        p_ng = mpmath.gamma(half_plus) / (mpmath.pi ** (mpmath.mpf(n) / 2) * mpmath.gamma(g))
        kappa = 2 ** (2 * g - 1) * mpmath.gamma(g) / mpmath.gamma(1 - g)
        d1 = 2 ** (1 - g) / mpmath.gamma(g)
        d2 = 2 * mpmath.gamma(half_plus) ** ((n - 2 * g) / (4 * g)) / mpmath.gamma(
            half_minus
        ) ** ((n + 2 * g) / (4 * g))
        return PaperConstants(
            float(c_ng), float(p_ng), float(kappa), float(d1), float(d2), sphere_measure(n)
        )


def bessel_k(order: float, t: float, dps: int = DPS) -> float:
    """K_order(t) to better than 1e-12 relative on t in [1e-6, 700]."""
    order = abs(float(order))
    if not order < 5:
        raise BesselDomainError("order must satisfy |order| < 5")
    if t <= 0:
        raise BesselDomainError("t must be positive")
    if t > 700:
        raise BesselUnderflowError(f"K underflows double precision at t={t}")
    with mpmath.workdps(dps):
        return float(mpmath.besselk(order, t))


def bessel_k_integral(order: float, t: float, dps: int = DPS) -> float:
    """Independent oracle: K_order(t) = int_0^inf exp(-t cosh s) cosh(order s) ds."""
    if t <= 0:
        raise BesselDomainError("t must be positive")
    with mpmath.workdps(dps):
        g = mpmath.mpf(abs(order))
        tt = mpmath.mpf(t)
        val = mpmath.quad(
            lambda s: mpmath.exp(-tt * mpmath.cosh(s)) * mpmath.cosh(g * s),
            [0, 5, 15, 40],
        )
        return float(val)


def _mp_profiles(n: int, gamma, t, need_what: bool = True):
    """phi, phi', what, what' at mpmath precision (assumes workdps set)."""
    g = mpmath.mpf(gamma)
    t = mpmath.mpf(t)
    kg = mpmath.besselk(g, t)
    kd = -(mpmath.besselk(g - 1, t) + mpmath.besselk(g + 1, t)) / 2
    d1 = 2 ** (1 - g) / mpmath.gamma(g)
    phi = d1 * t**g * kg
    phip = d1 * (g * t ** (g - 1) * kg + t**g * kd)
    if not need_what:
        return phi, phip, None, None
    half_plus = (n + 2 * g) / 2
    half_minus = (n - 2 * g) / 2
    d2 = 2 * mpmath.gamma(half_plus) ** ((n - 2 * g) / (4 * g)) / mpmath.gamma(
        half_minus
    ) ** ((n + 2 * g) / (4 * g))
    what = d2 * t ** (-g) * kg
    whatp = d2 * (-g * t ** (-g - 1) * kg + t ** (-g) * kd)
    return phi, phip, what, whatp


def eval_profiles(n: int, gamma: float, t: float) -> ProfilePoint:
    """Profile factors and first derivatives at t > 0."""
    if t <= 0:
        raise ValueError("t must be positive")
    if not 0 < gamma < 1:
        raise ValueError("gamma must lie in (0,1)")
    if not n > 4 * gamma - 1:
        raise ValueError("need n > 4*gamma - 1")
    with mpmath.workdps(DPS):
        phi, phip, what, whatp = _mp_profiles(n, gamma, t)
        return ProfilePoint(float(phi), float(phip), float(what), float(whatp))


def _lead_exponent(side: str, gamma: float, d: int) -> float:
    if side == "phi":
        return 0.0 if d == 0 else 2 * gamma - 1
    return -2 * gamma if d == 0 else -2 * gamma - 1


def profile_moment_numeric(
    side: str, n: int, gamma: float, eta_int: int, eta_gamma_mult: int, derivs=(0, 0)
) -> float:
    """Adaptive quadrature of int x^eta u^(j) u^(j') dx for a profile u.

    eta = eta_int + eta_gamma_mult * gamma; side 'phi' or 'what'.
    Raises DivergentIntegralError naming the endpoint inequality when the
    exponent test at zero fails (decay at infinity is exponential).
    """
    gamma = float(gamma)
    eta = eta_int + eta_gamma_mult * gamma
    j, jp = derivs
    lead = _lead_exponent(side, gamma, j) + _lead_exponent(side, gamma, jp)
    if not eta + lead > -1:
        raise DivergentIntegralError(
            f"divergent at 0: need eta + {lead} > -1, eta = {eta} ({side}, derivs {tuple(derivs)})"
        )
    with mpmath.workdps(DPS):
        g = mpmath.mpf(gamma)
        eta_mp = eta_int + eta_gamma_mult * g

        if side == "phi":
            def integrand(t):
                phi, phip, _, _ = _mp_profiles(n, g, t, need_what=False)
                fac = (phi, phip)
                return t**eta_mp * fac[j] * fac[jp]
        else:
            def integrand(t):
                _, _, what, whatp = _mp_profiles(n, g, t)
                fac = (what, whatp)
                return t**eta_mp * fac[j] * fac[jp]

        val = mpmath.quad(integrand, [0, mpmath.mpf(1) / 2, 2, 10, 30, 80])
        # exponential tail beyond the last node: bound ~ e^(-2t) * poly; the
        # quadrature nodes above cover it to well below 1e-12 relative
        return float(val)


def moment_numeric(kind: str, n: int, gamma: float, alpha: int, deriv=(0, 0)) -> float:
    """A_alpha / B_alpha style moments of the profile factors.

    'A': int t^(alpha - 2 gamma) phi^(j) phi^(j') dt
    'B': int rho^(n - 1 - alpha + 2 gamma) what^(i) what^(i') drho
    """
    if kind == "A":
        return profile_moment_numeric("phi", n, gamma, alpha, -2, deriv)
    if kind == "B":
        return profile_moment_numeric("what", n, gamma, n - 1 - alpha, 2, deriv)
    raise ValueError("kind must be 'A' or 'B'")


class BubbleEvaluator:
    """Vectorized Poisson-kernel evaluation of the extended bubble.

    Uses the substituted convolution xi = x + xN*u, under which the
    kernel mass is xN-independent and the integrand stays smooth down to
    the boundary:

        W(r, xN) = p |S^(n-2)| int_0^inf int_0^pi s^(n-1) (1+s^2)^(-(n+2g)/2)
                   w1(sqrt(r^2 + 2 r xN s cos(th) + xN^2 s^2))
                   sin(th)^(n-2) dth ds

    with s = sinh(v) making the radial tail exponential.  Gauss-Legendre
    in (v, th); float64 throughout.
    """

    def __init__(self, n: int, gamma: float, n_v: int = 160, n_th: int = 96):
        import numpy as np

        self.np = np
        self.n = n
        self.gamma = float(gamma)
        c = constants(n, gamma)
        self.cng = c.c_ng
        self.png = c.p_ng
        g = self.gamma
        v_max = max(24.0, 20.0 / (2 * g))

        def gl(nn, a, b):
            x, w = np.polynomial.legendre.leggauss(nn)
            return 0.5 * (b - a) * x + 0.5 * (a + b), 0.5 * (b - a) * w

        v1, wv1 = gl(n_v, 0.0, 4.0)
        v2, wv2 = gl(n_v, 4.0, v_max)
        v = np.concatenate([v1, v2])
        wv = np.concatenate([wv1, wv2])
        s = np.sinh(v)
        # log-space guard: s^(n-1) alone overflows long before the decay
        # factor compensates
        log_ker = (n - 1) * np.log(s) - ((n + 2 * g) / 2) * np.log1p(s * s)
        kernel_radial = np.exp(log_ker + np.log(np.cosh(v))) * wv
        th, wth = gl(n_th, 0.0, math.pi)
        sn2 = 2 * math.pi ** ((n - 1) / 2) / math.gamma((n - 1) / 2)
        ang_w = np.sin(th) ** (n - 2) * wth * sn2
        self.s = s
        self.cth = np.cos(th)
        self.wgt = self.png * kernel_radial[:, None] * ang_w[None, :]

    def fields(self, r, xn, mode: str):
        """mode in 'w', 'dr', 'dn'; r and xn broadcast to a common shape."""
        np = self.np
        n, g = self.n, self.gamma
        q = (n - 2 * g) / 2
        r = np.asarray(r, dtype=float)
        xn = np.asarray(xn, dtype=float)
        shape = np.broadcast(r, xn).shape
        rf = np.broadcast_to(r, shape).reshape(-1)
        xf = np.broadcast_to(xn, shape).reshape(-1)
        out = np.empty(rf.size)
        s = self.s[None, :, None]
        cth = self.cth[None, None, :]
        wgt = self.wgt[None, :, :]
        chunk = max(1, int(6e6 / max(1, self.s.size * self.cth.size)))
        for i in range(0, rf.size, chunk):
            rr = rf[i : i + chunk, None, None]
            hh = xf[i : i + chunk, None, None]
            A = rr * rr + 2 * rr * hh * s * cth + hh * hh * s * s
            base = self.cng * (1 + A) ** (-q)
            if mode == "w":
                val = base
            elif mode == "dr":
                val = base * (-q) / (1 + A) * (2 * rr + 2 * hh * s * cth)
            elif mode == "dn":
                val = base * (-q) / (1 + A) * (2 * rr * s * cth + 2 * hh * s * s)
            else:
                raise ValueError(f"unknown mode {mode!r}")
            out[i : i + chunk] = np.sum(val * wgt, axis=(1, 2))
        return out.reshape(shape)

    def w(self, r, xn):
        return self.fields(r, xn, "w")

    def dr(self, r, xn):
        return self.fields(r, xn, "dr")

    def dn(self, r, xn):
        return self.fields(r, xn, "dn")


_bubble_cache: dict = {}


def _bubble_evaluator(n: int, gamma: float) -> BubbleEvaluator:
    key = (int(n), float(gamma))
    ev = _bubble_cache.get(key)
    if ev is None:
        if len(_bubble_cache) > 16:
            _bubble_cache.clear()
        ev = BubbleEvaluator(*key)
        _bubble_cache[key] = ev
    return ev


def bubble_extension(
    n: int, gamma: float, r: float, xN: float, deriv: str = "none"
) -> float:
    """Poisson-kernel value of the extended bubble at (|x| = r, xN > 0).

    deriv selects d/dr or d/dxN applied under the integral sign.
    """
    if xN <= 0:
        raise ValueError("xN must be positive")
    if r < 0:
        raise ValueError("r must be nonnegative")
    ev = _bubble_evaluator(n, gamma)
    mode = {"none": "w", "d_r": "dr", "d_N": "dn"}.get(deriv)
    if mode is None:
        raise ValueError(f"unknown deriv mode {deriv!r}")
    return float(ev.fields(r, xN, mode))


def fourier_side_w0(n: int, gamma: float, xN: float, dps: int = DPS) -> float:
    """Independent Fourier-side value of the extension on the axis r = 0:

    W(0, xN) = (2 pi)^(-n/2) |S^(n-1)| int what(rho) phi(rho xN) rho^(n-1) drho.
    """
    with mpmath.workdps(dps):
        g = mpmath.mpf(gamma)
        h = mpmath.mpf(xN)

        def integrand(rho):
            phi_at, _, _, _ = _mp_profiles(n, g, rho * h, need_what=False)
            _, _, what_at, _ = _mp_profiles(n, g, rho)
            return what_at * phi_at * rho ** (n - 1)

        sphere = 2 * mpmath.pi ** (mpmath.mpf(n) / 2) / mpmath.gamma(mpmath.mpf(n) / 2)
        val = (2 * mpmath.pi) ** (-mpmath.mpf(n) / 2) * sphere * mpmath.quad(
            integrand, [0, 1, 5, 20, 80]
        )
        return float(val)


def ode_residuals(n: int, gamma: float, t: float, h: float = 1e-6) -> tuple:
    """Relative defining-ODE residuals of phi and what at t, by central
    differences computed in extended precision."""
    with mpmath.workdps(40):
        g = mpmath.mpf(gamma)
        tt = mpmath.mpf(t)
        hh = mpmath.mpf(h)
        vals = [_mp_profiles(n, g, tt + k * hh) for k in (-1, 0, 1)]
        phi2 = (vals[2][0] - 2 * vals[1][0] + vals[0][0]) / hh**2
        what2 = (vals[2][2] - 2 * vals[1][2] + vals[0][2]) / hh**2
        r_phi = phi2 + (1 - 2 * g) / tt * vals[1][1] - vals[1][0]
        r_what = what2 + (1 + 2 * g) / tt * vals[1][3] - vals[1][2]
        return (
            float(abs(r_phi / vals[1][0])),
            float(abs(r_what / vals[1][2])),
        )
