import math

import mpmath
import pytest

from fracbubble.profiles import (
    BesselDomainError,
    BesselUnderflowError,
    DivergentIntegralError,
    bessel_k,
    bessel_k_integral,
    bubble_extension,
    constants,
    eval_profiles,
    fourier_side_w0,
    moment_numeric,
    ode_residuals,
    profile_moment_numeric,
    sphere_measure,
)


class TestBesselK:
    def test_half_order_closed_form(self):
        for t in (0.3, 1.0, 2.5, 10.0):
            exact = math.sqrt(math.pi / (2 * t)) * math.exp(-t)
            assert bessel_k(0.5, t) == pytest.approx(exact, rel=1e-12)

    def test_recurrence_grid(self):
        for g in (0.1, 0.25, 0.5, 0.7, 0.940197):
            for t in (0.05, 0.5, 2.3, 10.0, 50.0):
                lhs = bessel_k(g + 1, t) - bessel_k(abs(g - 1), t)
                rhs = (2 * g / t) * bessel_k(g, t)
                assert lhs == pytest.approx(rhs, rel=1e-12, abs=1e-300)

    def test_integral_representation_oracle(self):
        for (g, t) in [(0.940197, 1.0), (0.5, 2.0), (0.3, 0.7)]:
            assert bessel_k(g, t) == pytest.approx(
                bessel_k_integral(g, t), rel=1e-12
            )

    def test_monotone_decreasing(self):
        vals = [bessel_k(0.7, t) for t in (0.5, 1.0, 2.0, 4.0, 8.0)]
        assert all(a > b for a, b in zip(vals, vals[1:]))

    def test_domain_errors(self):
        with pytest.raises(BesselDomainError):
            bessel_k(0.5, 0.0)
        with pytest.raises(BesselDomainError):
            bessel_k(0.5, -1.0)
        with pytest.raises(BesselDomainError):
            bessel_k(5.5, 1.0)
        with pytest.raises(BesselUnderflowError):
            bessel_k(0.5, 701.0)


class TestProfiles:
    def test_gamma_half_closed_form(self):
        for t in (0.2, 1.0, 3.0):
            pp = eval_profiles(25, 0.5, t)
            assert pp.phi == pytest.approx(math.exp(-t), rel=1e-12)
            assert pp.phi_prime == pytest.approx(-math.exp(-t), rel=1e-12)

    def test_phi_limits(self):
        assert eval_profiles(25, 0.3, 1e-9).phi == pytest.approx(1.0, rel=1e-4)
        assert eval_profiles(25, 0.3, 30.0).phi < 1e-10

    def test_monotone_positive(self):
        grid = [0.1, 0.5, 1.0, 2.0, 5.0]
        for g in (0.25, 0.6):
            phis = [eval_profiles(25, g, t).phi for t in grid]
            whats = [eval_profiles(25, g, t).what for t in grid]
            assert all(v > 0 for v in phis + whats)
            assert all(a > b for a, b in zip(phis, phis[1:]))
            assert all(a > b for a, b in zip(whats, whats[1:]))

    def test_what_small_argument_power(self):
        # what ~ d2 Gamma(g) 2^(g-1) t^(-2g) near zero
        n, g = 25, 0.3
        c = constants(n, g)
        t = 1e-6
        lead = c.d2 * float(mpmath.gamma(g)) * 2 ** (g - 1) * t ** (-2 * g)
        assert eval_profiles(n, g, t).what == pytest.approx(lead, rel=1e-3)

    def test_ode_residuals(self):
        for (g, t) in [(0.3, 1.7), (0.5, 1.0), (0.75, 2.5)]:
            r_phi, r_what = ode_residuals(25, g, t)
            assert r_phi <= 1e-8
            assert r_what <= 1e-8

    def test_constants_positive_and_sphere(self):
        c = constants(25, 0.5)
        for v in (c.c_ng, c.p_ng, c.kappa_gamma, c.d1, c.d2, c.sphere_measure):
            assert v > 0
        assert sphere_measure(2) == pytest.approx(2 * math.pi, rel=1e-14)
        assert sphere_measure(3) == pytest.approx(4 * math.pi, rel=1e-14)


class TestMoments:
    def test_gamma_half_closed_forms(self):
        assert moment_numeric("A", 25, 0.5, 1) == pytest.approx(0.5, rel=1e-10)
        assert moment_numeric("A", 25, 0.5, 3) == pytest.approx(0.25, rel=1e-10)

    def test_b2_closed_form(self):
        n, g = 25, 0.5
        c = constants(n, g)
        closed = c.d2**2 * (math.pi / 2) * float(mpmath.gamma(22)) / 2**22
        assert moment_numeric("B", n, g, 2) == pytest.approx(closed, rel=1e-10)

    def test_divergence_error_names_inequality(self):
        with pytest.raises(DivergentIntegralError) as exc:
            profile_moment_numeric("what", 25, 0.5, 1, 0, (1, 1))
        assert "need eta" in str(exc.value)

    def test_b_moment_positive(self):
        assert moment_numeric("B", 25, 0.5, 4) > 0


class TestBubbleExtension:
    def test_boundary_trace(self):
        n, g, r = 25, 0.5, 0.8
        c = constants(n, g)
        w1 = c.c_ng * (1 + r * r) ** (-(n - 2 * g) / 2)
        assert bubble_extension(n, g, r, 1e-7) == pytest.approx(w1, rel=1e-5)

    def test_gamma_half_closed_form(self):
        n, g = 25, 0.5
        c = constants(n, g)
        for (r, xn) in [(0.0, 0.5), (0.8, 0.5), (2.0, 1.5)]:
            exact = c.c_ng * ((1 + xn) ** 2 + r * r) ** (-(n - 1) / 2)
            assert bubble_extension(n, g, r, xn) == pytest.approx(exact, rel=1e-9)

    def test_axis_monotone(self):
        vals = [bubble_extension(25, 0.3, 0.0, x) for x in (0.2, 0.5, 1.0, 2.0)]
        assert all(a > b for a, b in zip(vals, vals[1:]))

    def test_fourier_cross_check(self):
        n, g, xn = 25, 0.5, 0.5
        assert bubble_extension(n, g, 0.0, xn) == pytest.approx(
            fourier_side_w0(n, g, xn), rel=1e-5
        )

    def test_fourier_cross_check_off_half(self):
        n, g, xn = 25, 0.3, 0.8
        assert bubble_extension(n, g, 0.0, xn) == pytest.approx(
            fourier_side_w0(n, g, xn), rel=1e-5
        )

    def test_derivative_modes(self):
        n, g = 25, 0.4
        eps = 1e-5
        dr = bubble_extension(n, g, 0.8, 0.5, deriv="d_r")
        dr_fd = (
            bubble_extension(n, g, 0.8 + eps, 0.5)
            - bubble_extension(n, g, 0.8 - eps, 0.5)
        ) / (2 * eps)
        assert dr == pytest.approx(dr_fd, rel=1e-6)
        dn = bubble_extension(n, g, 0.8, 0.5, deriv="d_N")
        dn_fd = (
            bubble_extension(n, g, 0.8, 0.5 + eps)
            - bubble_extension(n, g, 0.8, 0.5 - eps)
        ) / (2 * eps)
        assert dn == pytest.approx(dn_fd, rel=1e-6)


@pytest.mark.slow
class TestPlancherel:
    def test_physical_equals_fourier(self):
        # int W(., xN)^2 dxbar (radially reduced) versus the Fourier side
        import numpy as np

        from fracbubble.profiles import BubbleEvaluator, _mp_profiles

        n, g = 25, 0.5
        ev = BubbleEvaluator(n, g)
        for xn in (0.5, 1.0):
            x, w = np.polynomial.legendre.leggauss(220)
            r1 = 0.5 * 3.0 * x + 1.5
            w1 = 0.5 * 3.0 * w
            r2 = 0.5 * 27.0 * x + 16.5
            w2 = 0.5 * 27.0 * w
            r = np.concatenate([r1, r2])
            wts = np.concatenate([w1, w2])
            vals = ev.w(r, np.full_like(r, xn)) ** 2 * r ** (n - 1)
            physical = sphere_measure(n) * float(wts @ vals)
            with mpmath.workdps(30):
                def integrand(rho):
                    phi, _, what, _ = _mp_profiles(n, g, rho)
                    phi_at, _, _, _ = _mp_profiles(n, g, rho * xn, need_what=False)
                    return (what * phi_at) ** 2 * rho ** (n - 1)

                fourier = sphere_measure(n) * float(
                    mpmath.quad(integrand, [0, 1, 5, 20, 80])
                )
            assert physical == pytest.approx(fourier, rel=1e-5)
