import pytest

from fracbubble.exact import rat
from fracbubble.moments import (
    DivergentMomentError,
    MomentKey,
    MomentReducer,
    ParityError,
    a_moment_key,
    b_moment_key,
    reduce_phi_moment,
    reduce_what_moment,
)
from fracbubble.profiles import profile_moment_numeric


class TestPhiReduction:
    def test_a3_coefficient(self):
        # eq of exponent descent at eta = 3 - 2*gamma gives A3 = (2/3)(1-g^2) A1
        for g in (rat(1, 4), rat(1, 2), rat(3, 4)):
            mv = reduce_phi_moment(25, g, a_moment_key(3))
            assert mv.convergent
            assert mv.coeff == rat(2, 3) * (1 - g * g)

    def test_half_gamma_closed_forms(self):
        mv = reduce_phi_moment(25, rat(1, 2), a_moment_key(3))
        assert mv.coeff == rat(1, 2)  # A3 = A1/2 and A1 = 1/2, A3 = 1/4

    def test_mixed_by_parts(self):
        # int t^(2-2g) phi phi' = -(1-g) * A1
        for g in (rat(1, 3), rat(1, 2)):
            mv = reduce_phi_moment(25, g, MomentKey("phi", 2, -2, (0, 1)))
            assert mv.coeff == -(1 - g)

    def test_derivative_elimination(self):
        # int (phi')^2 t^(3-2g) = (2-g)/(1+g) * A3
        g = rat(1, 2)
        mv = reduce_phi_moment(25, g, MomentKey("phi", 3, -2, (1, 1)))
        expect = (2 - g) / (1 + g) * (rat(2, 3) * (1 - g * g))
        assert mv.coeff == expect


class TestWhatReduction:
    def test_b4_over_b2(self):
        n, g = 25, rat(1, 2)
        mv = reduce_what_moment(n, g, b_moment_key(n, 4))
        expect = 4 * (n - 3) / rat((n - 4) * (n - 2 * g - 4) * (n + 2 * g - 4))
        assert mv.coeff == expect

    def test_mixed_composition_value(self):
        # phi-side factor -(1-g) times what-side mixed moment reproduces
        # the printed product 2(1-g)(n-3)/((n-4)(n-2g-4)) = 11/210 at (25, 1/2)
        n, g = 25, rat(1, 2)
        phi = reduce_phi_moment(n, g, MomentKey("phi", 2, -2, (0, 1))).coeff
        what = reduce_what_moment(n, g, MomentKey("what", n - 4, 2, (0, 1))).coeff
        assert phi * what == rat(11, 210)

    def test_divergent_endpoint(self):
        # b-moment with rho-exponent at 0 forced <= -1 + 4*gamma
        n, g = 25, rat(1, 2)
        mv = reduce_what_moment(n, g, MomentKey("what", 1, 2, (1, 1)))
        assert not mv.convergent
        assert "divergent at 0" in mv.violated_condition

    def test_parity_error(self):
        # base int part at n = 25 is 22; an odd offset cannot descend
        with pytest.raises(ParityError):
            MomentReducer(25, rat(1, 2)).reduce_coeff(MomentKey("what", 21, 2, (0, 0)))

    def test_gamma_mult_mismatch(self):
        with pytest.raises(ParityError):
            MomentReducer(25, rat(1, 2)).reduce_coeff(MomentKey("phi", 3, 0, (0, 0)))


@pytest.mark.slow
class TestNumericAgreement:
    POINTS = [(25, rat(1, 2)), (30, rat(3, 4)), (52, rat(1, 4))]

    @pytest.mark.parametrize("n,g", POINTS, ids=str)
    def test_reduction_vs_quadrature(self, n, g):
        red = MomentReducer(n, g)
        gf = float(g.numerator) / float(g.denominator)
        base_a = profile_moment_numeric("phi", n, gf, 1, -2, (0, 0))
        base_b = profile_moment_numeric("what", n, gf, n - 3, 2, (0, 0))
        keys = [
            MomentKey("phi", 1, -2, (0, 0)),
            MomentKey("phi", 3, -2, (0, 0)),
            MomentKey("phi", 5, -2, (0, 0)),
            MomentKey("phi", 2, -2, (0, 1)),
            MomentKey("phi", 3, -2, (1, 1)),
            MomentKey("phi", 5, -2, (1, 1)),
            MomentKey("what", n - 3, 2, (0, 0)),
            MomentKey("what", n - 5, 2, (0, 0)),
            MomentKey("what", n - 7, 2, (0, 0)),
            MomentKey("what", n - 4, 2, (0, 1)),
            MomentKey("what", n - 3, 2, (1, 1)),
            MomentKey("what", n - 1, 2, (0, 0)),
        ]
        for key in keys:
            coeff = red.reduce_coeff(key)
            base = base_a if key.side == "phi" else base_b
            pred = float(coeff) * base
            got = profile_moment_numeric(
                key.side, n, gf, key.int_part, key.gamma_mult, key.derivs
            )
            assert got == pytest.approx(pred, rel=1e-8), key


@pytest.mark.slow
class TestOdeIdentitiesNumeric:
    """The two rewriting identities, checked by quadrature where the
    endpoint conditions hold and rejected by the reducer where not."""

    GAMMAS = [rat(1, 4), rat(1, 2), rat(3, 4)]
    ETAS = [2, 3, 4, 5]

    @pytest.mark.parametrize("g", GAMMAS, ids=str)
    @pytest.mark.parametrize("eta", ETAS)
    @pytest.mark.parametrize("side", ["phi", "what"])
    def test_derivative_elimination_identity(self, side, eta, g):
        n = 25
        gf = float(g)
        alpha = 1 - 2 * gf if side == "phi" else 1 + 2 * gf
        valid = eta > 1 - 4 * gf if side == "phi" else eta > 4 * gf + 1
        if not valid:
            pytest.skip("identity hypotheses fail at this exponent")
        lhs = profile_moment_numeric(side, n, gf, eta, 0, (1, 1))
        rhs = profile_moment_numeric(side, n, gf, eta, 0, (0, 0))
        factor = ((eta + 1) / 2) / ((eta + 1) / 2 - alpha)
        assert lhs == pytest.approx(factor * rhs, rel=1e-8)

    @pytest.mark.parametrize("g", GAMMAS, ids=str)
    @pytest.mark.parametrize("eta", ETAS)
    @pytest.mark.parametrize("side", ["phi", "what"])
    def test_exponent_descent_identity(self, side, eta, g):
        n = 25
        gf = float(g)
        alpha = 1 - 2 * gf if side == "phi" else 1 + 2 * gf
        valid = eta > 1 if side == "phi" else eta > 4 * gf + 1
        if not valid:
            pytest.skip("identity hypotheses fail at this exponent")
        lhs = profile_moment_numeric(side, n, gf, eta, 0, (0, 0))
        rhs = profile_moment_numeric(side, n, gf, eta - 2, 0, (0, 0))
        half = (eta + 1) / 2
        factor = (eta - alpha) * ((eta - 1) / 2) / (1 + half / (half - alpha))
        assert lhs == pytest.approx(factor * rhs, rel=1e-8)
