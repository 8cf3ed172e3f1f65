"""Exact rational arithmetic, univariate polynomials, quadratic-field
elements and sign-certified bisection.

Everything downstream (moment reduction, term rewriting, polynomial
assembly, discriminant sweeps) computes over the scalar type defined
here.  Scalars are arbitrary-precision rationals, canonically reduced
with positive denominator; all operations are exact.
"""

from __future__ import annotations

from typing import Callable, Iterable, Sequence, Union

try:
    from gmpy2 import mpq as Rat
except ImportError:  # pragma: no cover - gmpy2 is a declared dependency
    from fractions import Fraction as Rat

RatLike = Union[int, str, "Rat"]

ZERO = Rat(0)
ONE = Rat(1)


def rat(value: RatLike, den: int | None = None) -> Rat:
    """Coerce ints, 'p/q' strings or rationals to the exact scalar type."""
    if den is not None:
        return Rat(value, den)
    if isinstance(value, str):
        if "/" in value:
            p, q = value.split("/", 1)
            return Rat(int(p), int(q))
        return Rat(int(value))
    return Rat(value)


def rat_str(x: RatLike) -> str:
    """Canonical 'p/q' serialization (reduced, q > 0); integers as 'p/1'."""
    x = rat(x)
    return f"{x.numerator}/{x.denominator}"


def sign(x) -> int:
    if x > 0:
        return 1
    if x < 0:
        return -1
    return 0


class ExactPoly:
    """Dense univariate polynomial over exact rationals.

    Coefficients are stored ascending (index = power); the leading
    coefficient is nonzero unless the polynomial is identically zero,
    in which case the list is empty.
    """

    __slots__ = ("coeffs", "var")

    def __init__(self, coeffs: Iterable[RatLike] = (), var: str = "t"):
        cs = [rat(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs: list = cs
        self.var = var

    @classmethod
    def constant(cls, c: RatLike, var: str = "t") -> "ExactPoly":
        return cls([rat(c)], var)

    @classmethod
    def monomial(cls, power: int, c: RatLike = 1, var: str = "t") -> "ExactPoly":
        return cls([ZERO] * power + [rat(c)], var)

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __getitem__(self, power: int):
        if 0 <= power < len(self.coeffs):
            return self.coeffs[power]
        return ZERO

    def _check_var(self, other: "ExactPoly") -> None:
        if self.var != other.var:
            raise ValueError(
                f"variable-label mismatch: {self.var!r} vs {other.var!r}"
            )

    def __eq__(self, other) -> bool:
        if isinstance(other, ExactPoly):
            return self.var == other.var and self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self):
        return hash((self.var, tuple(self.coeffs)))

    def __add__(self, other: "ExactPoly") -> "ExactPoly":
        self._check_var(other)
        m = max(len(self.coeffs), len(other.coeffs))
        return ExactPoly(
            [self[i] + other[i] for i in range(m)], self.var
        )

    def __sub__(self, other: "ExactPoly") -> "ExactPoly":
        return self + (-other)

    def __neg__(self) -> "ExactPoly":
        return ExactPoly([-c for c in self.coeffs], self.var)

    def __mul__(self, other) -> "ExactPoly":
        if isinstance(other, ExactPoly):
            self._check_var(other)
            if self.is_zero() or other.is_zero():
                return ExactPoly([], self.var)
            out = [ZERO] * (len(self.coeffs) + len(other.coeffs) - 1)
            for i, a in enumerate(self.coeffs):
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
            return ExactPoly(out, self.var)
        return ExactPoly([c * rat(other) for c in self.coeffs], self.var)

    __rmul__ = __mul__

    def derive(self) -> "ExactPoly":
        """Formal derivative."""
        return ExactPoly(
            [i * c for i, c in enumerate(self.coeffs)][1:], self.var
        )

    def eval(self, x):
        """Exact Horner evaluation; x may be a rational or QuadExtScalar."""
        acc = None
        for c in reversed(self.coeffs):
            acc = c if acc is None else acc * x + c
        if acc is None:
            return ZERO if not isinstance(x, QuadExtScalar) else x * 0
        return acc

    def __call__(self, x):
        return self.eval(x)

    def __repr__(self) -> str:
        if self.is_zero():
            return "0"
        parts = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if i == 0:
                parts.append(rat_str(c))
            else:
                parts.append(f"({rat_str(c)})*{self.var}^{i}")
        return " + ".join(parts)


def poly_arith(lhs: ExactPoly, rhs=None, op: str = "add", at=None):
    """Dispatch wrapper over the polynomial primitives.

    op: 'add' | 'mul' | 'derive' | 'eval' (rhs unused for the last two;
    'eval' takes the evaluation point in `at`).
    """
    if op == "add":
        return lhs + rhs
    if op == "mul":
        return lhs * rhs
    if op == "derive":
        return lhs.derive()
    if op == "eval":
        return lhs.eval(rat(at))
    raise ValueError(f"unknown op {op!r}")


class QuadExtScalar:
    """Element base + coeff*sqrt(radicand) of a real quadratic field.

    The radicand is a fixed nonnegative rational shared by both operands
    of any arithmetic operation.  Sign determination is exact: it never
    touches floating point.
    """

    __slots__ = ("base", "coeff", "radicand")

    def __init__(self, base: RatLike, coeff: RatLike, radicand: RatLike):
        self.base = rat(base)
        self.coeff = rat(coeff)
        self.radicand = rat(radicand)
        if self.radicand < 0:
            raise ValueError("radicand must be nonnegative")
        if self.radicand == 0:
            self.coeff = ZERO

    def _check(self, other: "QuadExtScalar") -> None:
        if self.radicand != other.radicand and self.coeff != 0 and other.coeff != 0:
            raise ValueError("mixed quadratic fields")

    @classmethod
    def rational(cls, x: RatLike, radicand: RatLike = 0) -> "QuadExtScalar":
        return cls(x, 0, radicand)

    def _lift(self, other) -> "QuadExtScalar":
        if isinstance(other, QuadExtScalar):
            self._check(other)
            return other
        return QuadExtScalar(rat(other), 0, self.radicand)

    def __add__(self, other) -> "QuadExtScalar":
        o = self._lift(other)
        rad = self.radicand if self.coeff != 0 or o.coeff == 0 else o.radicand
        return QuadExtScalar(self.base + o.base, self.coeff + o.coeff, rad)

    __radd__ = __add__

    def __neg__(self) -> "QuadExtScalar":
        return QuadExtScalar(-self.base, -self.coeff, self.radicand)

    def __sub__(self, other) -> "QuadExtScalar":
        return self + (-self._lift(other))

    def __rsub__(self, other) -> "QuadExtScalar":
        return (-self) + other

    def __mul__(self, other) -> "QuadExtScalar":
        o = self._lift(other)
        rad = self.radicand if self.coeff != 0 or o.coeff == 0 else o.radicand
        return QuadExtScalar(
            self.base * o.base + self.coeff * o.coeff * rad,
            self.base * o.coeff + self.coeff * o.base,
            rad,
        )

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        o = self._lift(other)
        return self.base == o.base and self.coeff == o.coeff

    def __hash__(self):
        return hash((self.base, self.coeff, self.radicand))

    def sign(self) -> int:
        """Exact sign of base + coeff*sqrt(radicand)."""
        a, b, d = self.base, self.coeff, self.radicand
        if b == 0 or d == 0:
            return sign(a)
        if a == 0:
            return sign(b)
        if a > 0 and b > 0:
            return 1
        if a < 0 and b < 0:
            return -1
        # opposite signs: compare a^2 with b^2 d exactly
        lhs, rhs = a * a, b * b * d
        if lhs == rhs:
            return 0
        return sign(a) if lhs > rhs else sign(b)

    def is_positive(self) -> bool:
        return self.sign() > 0

    def __gt__(self, other) -> bool:
        return (self - self._lift(other)).sign() > 0

    def __lt__(self, other) -> bool:
        return (self - self._lift(other)).sign() < 0

    def to_float(self, prec_digits: int = 50) -> float:
        import mpmath

        with mpmath.workdps(prec_digits):
            return float(
                mpmath.mpf(self.base.numerator) / mpmath.mpf(self.base.denominator)
                + (mpmath.mpf(self.coeff.numerator) / mpmath.mpf(self.coeff.denominator))
                * mpmath.sqrt(
                    mpmath.mpf(self.radicand.numerator)
                    / mpmath.mpf(self.radicand.denominator)
                )
            )

    def __repr__(self) -> str:
        return (
            f"{rat_str(self.base)} + ({rat_str(self.coeff)})*sqrt({rat_str(self.radicand)})"
        )


def quad_field_eval(p: ExactPoly, x: QuadExtScalar) -> QuadExtScalar:
    """Exact Horner evaluation of p at a quadratic-field point."""
    acc = QuadExtScalar.rational(0, x.radicand)
    for c in reversed(p.coeffs):
        acc = acc * x + QuadExtScalar.rational(c, x.radicand)
    return acc


class SameSignError(ValueError):
    """Bisection endpoints do not bracket a sign change."""


def root_isolate(
    f: Callable[["Rat"], "Rat"],
    lo: RatLike,
    hi: RatLike,
    width: RatLike,
) -> tuple:
    """Bisect for a sign change of f on [lo, hi].

    Returns (a, b) with b - a <= width and sign(f(a)) != sign(f(b)),
    both signs determined exactly.  If a probe hits an exact zero the
    degenerate interval (x, x) is returned.  Midpoints are arithmetic
    means, so denominators grow by a factor of two per step.
    """
    lo, hi, width = rat(lo), rat(hi), rat(width)
    if width <= 0:
        raise ValueError("width must be positive")
    if hi <= lo:
        raise ValueError("need lo < hi")
    flo, fhi = f(lo), f(hi)
    slo, shi = sign(flo), sign(fhi)
    if slo == 0:
        return (lo, lo)
    if shi == 0:
        return (hi, hi)
    if slo == shi:
        raise SameSignError(
            f"f({rat_str(lo)}) and f({rat_str(hi)}) have the same sign {slo}"
        )
    while hi - lo > width:
        mid = (lo + hi) / 2
        fm = f(mid)
        sm = sign(fm)
        if sm == 0:
            return (mid, mid)
        if sm == slo:
            lo = mid
        else:
            hi = mid
    return (lo, hi)
