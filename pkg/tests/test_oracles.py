import pytest

from fracbubble.exact import rat
from fracbubble.fourier import FIntegralKey, f_integral_exact, f_integral_oracle
from fracbubble.oracles import f_integral_fourier_fd, f_integral_poisson
from fracbubble.profiles import moment_numeric, sphere_measure

pytestmark = pytest.mark.slow


def unit(n, g):
    return (
        sphere_measure(n)
        * moment_numeric("A", n, g, 1)
        * moment_numeric("B", n, g, 2)
    )


class TestFourierFD:
    @pytest.mark.parametrize(
        "kind,alpha,beta",
        [(1, 1, 0), (1, 1, 2), (2, 1, 2), (4, 3, 0), (1, 3, 2), (1, 1, 4)],
    )
    def test_agrees_with_engine(self, kind, alpha, beta):
        n, g = 25, rat(1, 2)
        key = FIntegralKey(kind, alpha, beta)
        expected = float(f_integral_exact(key, n, g)) * unit(n, 0.5)
        got = f_integral_fourier_fd(key, n, 0.5)
        assert got.value == pytest.approx(expected, rel=1e-6)

    def test_off_half_gamma(self):
        n, g = 30, rat(1, 4)
        key = FIntegralKey(1, 3, 2)
        expected = float(f_integral_exact(key, n, g)) * unit(n, 0.25)
        got = f_integral_fourier_fd(key, n, 0.25)
        assert got.value == pytest.approx(expected, rel=1e-6)

    def test_guard(self):
        with pytest.raises(ValueError):
            f_integral_fourier_fd(FIntegralKey(1, 1, 8), 25, 0.5)


class TestPoisson:
    def test_normalization_key(self):
        n = 25
        key = FIntegralKey(1, 1, 0)
        got = f_integral_poisson(key, n, 0.5)
        assert got.value == pytest.approx(unit(n, 0.5), rel=1e-3)

    def test_gradient_key(self):
        n, g = 25, rat(1, 2)
        key = FIntegralKey(4, 3, 0)
        expected = float(f_integral_exact(key, n, g)) * unit(n, 0.5)
        got = f_integral_poisson(key, n, 0.5)
        assert got.value == pytest.approx(expected, rel=1e-3)

    def test_scaling_law(self):
        # dilation carries delta^(alpha+beta+1) on density integrals
        key = FIntegralKey(1, 1, 2)
        v1 = f_integral_poisson(key, 25, 0.5, delta=1.0)
        v2 = f_integral_poisson(key, 25, 0.5, delta=2.0)
        assert v2.value / v1.value == pytest.approx(2.0**4, rel=1e-3)

    def test_gradient_scaling_law(self):
        # gradient integrals carry delta^(alpha+beta-1)
        key = FIntegralKey(2, 3, 2)
        v1 = f_integral_poisson(key, 25, 0.5, delta=1.0)
        v2 = f_integral_poisson(key, 25, 0.5, delta=2.0)
        assert v2.value / v1.value == pytest.approx(2.0**4, rel=1e-3)

    def test_guard(self):
        with pytest.raises(ValueError):
            f_integral_poisson(FIntegralKey(1, 9, 4), 25, 0.5)


class TestDispatch:
    def test_oracle_dispatch(self):
        key = FIntegralKey(1, 1, 0)
        a = f_integral_oracle(key, 25, 0.5, "fourier_fd")
        assert a.method == "fourier_fd"
        with pytest.raises(ValueError):
            f_integral_oracle(key, 25, 0.5, "nonsense")
