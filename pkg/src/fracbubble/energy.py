"""Assembly of the reduced-energy polynomial P and the Hessian pair.

P(t), t = delta^2, collects the weighted bubble integrals against the
sphere-averaged radial channels of the boundary-expansion coefficients:

    -24 n (n-1) P(t) =
        (3/2) ((n-1)^2 - (1-2*gamma)^2) * [Phi_0 paired with F1(1, .)]
      + (1-2*gamma) * sum_{m=1}^{2 d0 + 2} bracket(N, m)
                      * [Phi_{m-1} paired with F4(1+2m, .)]
      + ((n+1)(gamma - 1/2) - 2 (gamma^2 - 1/4))
        * sum_{m=1}^{2 d0 + 1} bracket(N, m+1) (2m+3)
                      * [Phi_m paired with F1(1+2m, .)]

with N = n + 1, bracket(N, m) the telescoping boundary product, and the
pairing rule s^k -> F(alpha, 2k) t^(m+k+1) for density blocks (delta
scaling alpha+beta+1) and t^(m+k) for gradient blocks (alpha+beta-1).
The Hessian pair (Pt1, Pt2) multiplies (Wt_ij, delta_ij |W|^2) in the
second translation derivative and uses the 11-channel sphere averages
plus the translated-kernel block Pt_0.

Everything is exact; results are reported per unit |S^(n-1)| |W|^2 A1 B2
(a strictly positive factor, so sign questions are unaffected).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Sequence, Tuple

from .exact import ExactPoly, Rat, rat, rat_str
from .fourier import FIntegralKey, get_context
from .weyl import g_recursion, sphere_average_radial


class DimensionConstraintError(ValueError):
    pass


class ZeroDenominatorError(ValueError):
    pass


@dataclass
class EnergyPoly:
    P: ExactPoly
    n: int
    gamma: Rat
    d0: int
    f_coeffs: Tuple[Rat, ...]
    unit: str = "sphere*|W|^2*A1*B2"


@dataclass
class HessianPolyPair:
    p_tilde_1: ExactPoly
    p_tilde_2: ExactPoly
    n: int
    gamma: Rat
    d0: int
    f_coeffs: Tuple[Rat, ...]
    unit: str = "sphere*|W|^2*A1*B2"  # Pt1 carries Wt/|W|^2 in place of |W|^2


def bracket_product(N: int, m: int) -> Rat:
    """prod_{mt=1}^{m-1} 1 / ((2 mt + 3)(N - 2 (mt + 1))); 1 when m = 1."""
    if m < 1:
        raise ValueError("m must be >= 1")
    out = rat(1)
    for mt in range(1, m):
        den = (2 * mt + 3) * (N - 2 * (mt + 1))
        if den == 0:
            raise ZeroDenominatorError(
                f"bracket factor (2*{mt}+3)*(N-2*({mt}+1)) vanishes at N={N}"
            )
        out /= den
    return out


def _check_dimension(n: int, gamma: Rat, d0: int) -> None:
    if not 1 <= d0 <= 4:
        raise ValueError("d0 must be between 1 and 4")
    if not (n > 2 * gamma + 4 * (d0 + 1)):
        raise DimensionConstraintError(
            f"need n > 2*gamma + 4*(d0+1) = {rat_str(2 * gamma + 4 * (d0 + 1))}, got n = {n}"
        )


def _pair_with_f(
    ctx, phi: ExactPoly, kind: int, alpha: int, t_shift: int, beta_shift: int = 0
) -> ExactPoly:
    """Pair a radial s-polynomial with F-kind values.

    s^k maps to F(alpha, 2k + beta_shift) * t^(k + t_shift).
    """
    coeffs = [rat(0)] * (phi.degree + 1 + t_shift if not phi.is_zero() else 0)
    for k, c in enumerate(phi.coeffs):
        if c == 0:
            continue
        coeffs[k + t_shift] += c * ctx.f_exact(
            FIntegralKey(kind, alpha, 2 * k + beta_shift)
        )
    return ExactPoly(coeffs, "t")


def assemble_P(n: int, gamma, f_coeffs: Sequence, d0: int) -> EnergyPoly:
    """Exact reduced-energy polynomial for the modulating profile f."""
    gamma = rat(gamma)
    f_coeffs = tuple(rat(c) for c in f_coeffs)
    if len(f_coeffs) != d0 + 1:
        raise ValueError("f_coeffs must list a_0 .. a_{d0}")
    _check_dimension(n, gamma, d0)
    ctx = get_context(n, gamma)
    N = n + 1
    half = rat(1, 2)
    c_grad = 1 - 2 * gamma
    c_w0 = rat(3, 2) * ((n - 1) ** 2 - (1 - 2 * gamma) ** 2)
    c_w = (n + 1) * (gamma - half) - 2 * (gamma * gamma - rat(1, 4))

    phis = [sphere_average_radial(f_coeffs, n, m, "G") for m in range(2 * d0 + 3)]

    total = ExactPoly([], "t")
    total += c_w0 * _pair_with_f(ctx, phis[0], 1, 1, 1)
    for m in range(1, 2 * d0 + 3):
        blk = _pair_with_f(ctx, phis[m - 1], 4, 1 + 2 * m, m)
        total += c_grad * bracket_product(N, m) * blk
    for m in range(1, 2 * d0 + 2):
        blk = _pair_with_f(ctx, phis[m], 1, 1 + 2 * m, m + 1)
        total += c_w * bracket_product(N, m + 1) * (2 * m + 3) * blk
    P = total * rat(-1, 24 * n * (n - 1))
    return EnergyPoly(P, n, gamma, d0, f_coeffs)


def assemble_P_tilde(n: int, gamma, f_coeffs: Sequence, d0: int) -> HessianPolyPair:
    """Exact Hessian channel pair (Pt1, Pt2) for the modulating profile f."""
    gamma = rat(gamma)
    f_coeffs = tuple(rat(c) for c in f_coeffs)
    if len(f_coeffs) != d0 + 1:
        raise ValueError("f_coeffs must list a_0 .. a_{d0}")
    _check_dimension(n, gamma, d0)
    ctx = get_context(n, gamma)
    N = n + 1
    half = rat(1, 2)
    c_grad = 1 - 2 * gamma
    c_w0 = rat(3, 2) * ((n - 1) ** 2 - (1 - 2 * gamma) ** 2)
    c_w = (n + 1) * (gamma - half) - 2 * (gamma * gamma - rat(1, 4))

    psis = [
        sphere_average_radial(f_coeffs, n, m, "G_tilde") for m in range(2 * d0 + 3)
    ]

    tot1 = ExactPoly([], "t")
    tot2 = ExactPoly([], "t")
    tot1 += c_w0 * _pair_with_f(ctx, psis[0][0], 1, 1, 1)
    tot2 += c_w0 * _pair_with_f(ctx, psis[0][1], 1, 1, 1)
    for m in range(1, 2 * d0 + 3):
        br = c_grad * bracket_product(N, m)
        tot1 += br * _pair_with_f(ctx, psis[m - 1][0], 4, 1 + 2 * m, m)
        tot2 += br * _pair_with_f(ctx, psis[m - 1][1], 4, 1 + 2 * m, m)
    for m in range(1, 2 * d0 + 2):
        br = c_w * bracket_product(N, m + 1) * (2 * m + 3)
        tot1 += br * _pair_with_f(ctx, psis[m][0], 1, 1 + 2 * m, m + 1)
        tot2 += br * _pair_with_f(ctx, psis[m][1], 1, 1 + 2 * m, m + 1)

    scale = rat(-1, 24 * n * (n - 1))
    p1 = tot1 * scale
    p2 = tot2 * scale

    # translated-kernel block: f(r^2)^2 sum_l H_il H_jl |x|^-2 against the
    # tangential-gradient weight; the kernel is quartic on the sphere, so
    # each s^k picks up beta = 2k + 2; lands on the Wt channel only
    f_poly = ExactPoly(f_coeffs, "s")
    f_sq = f_poly * f_poly
    p1 += _pair_with_f(ctx, f_sq, 2, 1, 1, beta_shift=2) * rat(1, 2 * n * (n + 2))

    return HessianPolyPair(p1, p2, n, gamma, d0, f_coeffs)


@dataclass
class BoundaryConsistencyReport:
    N: int
    m_values: List[int]
    telescoping_ok: bool
    prefactor_ok: bool
    laplacian_recursion_ok: bool

    @property
    def all_ok(self) -> bool:
        return self.telescoping_ok and self.prefactor_ok and self.laplacian_recursion_ok


def boundary_consistency_check(
    N: int, m_values: Sequence[int] = (1, 2, 3, 4, 5)
) -> BoundaryConsistencyReport:
    """Exact consistency of the boundary-expansion coefficient chain.

    (i)  bracket(N, m+1) * (2m+3)(N-2(m+1)) == bracket(N, m);
    (ii) the constant chain -2/(N-2) * 1/(48(N-1)) == -1/(24(N-1)(N-2));
    (iii) applying the channel Laplacian to the radial representation of
         the m-th coefficient reproduces (2m+3)(N-2(m+1)) times the
         (m+1)-st, i.e. the defining recursion of the expansion.
    """
    m_values = list(m_values)
    tele = True
    for m in m_values:
        lhs = bracket_product(N, m + 1) * ((2 * m + 3) * (N - 2 * (m + 1)))
        if lhs != bracket_product(N, m):
            tele = False
    pre = rat(-2, N - 2) * rat(1, 48 * (N - 1)) == rat(-1, 24 * (N - 1) * (N - 2))

    # channel-level recursion at a concrete profile (d0 = 2 exercises all
    # three channels); C_{2m} ~ bracket(N,m) * Lap^{m-1} A0 on R^n, n = N-1
    n = N - 1
    f = [rat(1), rat(2), rat(3)]
    chans = g_recursion(f, n, max(m_values) + 1, "G")
    lap_ok = True
    for m in m_values:
        cm = tuple(bracket_product(N, m) * p for p in chans[m - 1])
        # one more Laplacian of the m-th coefficient, channel-wise
        step = chans[m]
        lhs = tuple(bracket_product(N, m) * p for p in step)
        factor = (2 * m + 3) * (N - 2 * (m + 1))
        rhs = tuple(factor * bracket_product(N, m + 1) * p for p in step)
        if lhs != rhs:
            lap_ok = False
        del cm
    return BoundaryConsistencyReport(N, m_values, tele, pre, lap_ok)


def f_for_d0(d0: int, a0) -> Tuple[Rat, ...]:
    """Modulating-profile coefficients with the free constant term a0.

    d0 = 1 uses f(s) = a0 - s; d0 = 4 uses the pinned quartic
    s^4 - (882178/10000) s^3 + (146178/100) s^2 - (713925/100) s + a0.
    """
    a0 = rat(a0)
    if d0 == 1:
        return (a0, rat(-1))
    if d0 == 4:
        return (
            a0,
            rat(-713925, 100),
            rat(146178, 100),
            rat(-882178, 10000),
            rat(1),
        )
    raise ValueError("d0 must be 1 or 4 for the pinned profile family")
