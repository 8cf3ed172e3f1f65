from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fracbubble.exact import (
    ExactPoly,
    QuadExtScalar,
    SameSignError,
    poly_arith,
    quad_field_eval,
    rat,
    rat_str,
    root_isolate,
)

rationals = st.fractions(
    min_value=Fraction(-50), max_value=Fraction(50), max_denominator=20
).map(lambda f: rat(f.numerator, f.denominator))


def poly_from(coeffs, var="t"):
    return ExactPoly([rat(c) for c in coeffs], var)


class TestExactScalar:
    def test_canonical_form(self):
        x = rat(6, -4) if rat(6, 4).denominator == 2 else None
        y = rat(-3, 2)
        assert rat(6, 4) == rat(3, 2)
        assert rat_str(rat(3, 2)) == "3/2"
        assert rat_str(rat(-4, 8)) == "-1/2"
        assert rat_str(rat(5)) == "5/1"

    def test_parse_roundtrip(self):
        assert rat("22/7") == rat(22, 7)
        assert rat("-9") == rat(-9)
        assert rat(rat_str(rat(-22, 77))) == rat(-2, 7)

    @given(rationals, rationals, rationals)
    @settings(max_examples=200, deadline=None)
    def test_field_axioms(self, a, b, c):
        assert (a + b) + c == a + (b + c)
        assert a * (b + c) == a * b + a * c
        assert (a + b) - b == a


class TestExactPoly:
    def test_derive(self):
        p = poly_from([0, 3, 1])  # t^2 + 3t
        assert poly_arith(p, op="derive") == poly_from([3, 2])

    def test_eval_root(self):
        p = poly_from([-1, 0, 1])  # t^2 - 1
        assert poly_arith(p, op="eval", at=1) == 0

    def test_mul_difference_of_squares(self):
        assert poly_from([1, 1]) * poly_from([-1, 1]) == poly_from([-1, 0, 1])

    def test_variable_mismatch(self):
        with pytest.raises(ValueError):
            poly_from([1], "t") + poly_from([1], "s")

    def test_leading_zero_stripped(self):
        assert poly_from([1, 2, 0, 0]).degree == 1
        assert poly_from([0, 0]).is_zero()

    @given(
        st.lists(rationals, max_size=5),
        st.lists(rationals, max_size=5),
        rationals,
    )
    @settings(max_examples=100, deadline=None)
    def test_product_rule(self, ps, qs, x):
        p, q = poly_from(ps), poly_from(qs)
        lhs = (p * q).derive()
        rhs = p.derive() * q + p * q.derive()
        assert lhs == rhs
        assert (p * q).eval(x) == p.eval(x) * q.eval(x)


class TestQuadExt:
    def test_minimal_polynomial(self):
        x = QuadExtScalar(0, 1, 2)  # sqrt(2)
        p = poly_from([-2, 0, 1], "a0")
        assert quad_field_eval(p, x) == QuadExtScalar.rational(0, 2)

    def test_identity_eval(self):
        x = QuadExtScalar(1, 0, 5)
        assert quad_field_eval(poly_from([0, 1], "a0"), x) == x

    def test_exact_sign(self):
        # 7/5 - sqrt(2) > 0 is false: 49/25 < 2
        assert QuadExtScalar(rat(7, 5), rat(-1), 2).sign() == -1
        assert QuadExtScalar(rat(3, 2), rat(-1), 2).sign() == 1
        assert QuadExtScalar(0, 0, 2).sign() == 0
        assert QuadExtScalar(rat(-1), rat(1), 1).sign() == 0  # 1 - 1

    @given(rationals, rationals, rationals, rationals)
    @settings(max_examples=100, deadline=None)
    def test_ring_ops_match_floats(self, a, b, c, d):
        x = QuadExtScalar(a, b, 7)
        y = QuadExtScalar(c, d, 7)
        import math

        def f(z):
            return float(z.base) + float(z.coeff) * math.sqrt(7)

        assert abs(f(x * y) - f(x) * f(y)) < 1e-6 * (1 + abs(f(x) * f(y)))
        assert abs(f(x + y) - (f(x) + f(y))) < 1e-9 * (1 + abs(f(x) + f(y)))

    @given(rationals, rationals)
    @settings(max_examples=150, deadline=None)
    def test_sign_agrees_with_float(self, a, b):
        x = QuadExtScalar(a, b, 3)
        import math

        approx = float(a) + float(b) * math.sqrt(3)
        if abs(approx) > 1e-9:
            assert x.sign() == (1 if approx > 0 else -1)


class TestRootIsolate:
    def test_sqrt2(self):
        lo, hi = root_isolate(lambda x: x * x - 2, 1, 2, rat(1, 1024))
        assert hi - lo <= rat(1, 1024)
        assert lo * lo < 2 < hi * hi

    def test_exact_zero_probe(self):
        lo, hi = root_isolate(lambda x: x, -1, 1, rat(1, 4))
        assert lo == hi == 0

    def test_same_sign_error(self):
        with pytest.raises(SameSignError):
            root_isolate(lambda x: x * x + 1, -1, 1, rat(1, 4))

    def test_bracket_postcondition(self):
        f = lambda x: (x - rat(1, 3)) * (x + 2)
        lo, hi = root_isolate(f, 0, 1, rat(1, 10**6))
        assert f(lo) * f(hi) <= 0
        assert lo <= rat(1, 3) <= hi
