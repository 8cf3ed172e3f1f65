"""Term-rewriting engine for Fourier-side profile expressions.

A term is  coeff * rho^a * xN^b * what^(i)(rho) * phi^(j)(rho*xN)  with
i, j in {0, 1}; a TermSum is a canonical finite combination of terms at
a fixed context (n, gamma).  The two profiles satisfy

    phi''(t)  = phi(t)  - (1-2*gamma)/t  * phi'(t)
    what''(r) = what(r) - (1+2*gamma)/r * what'(r)

so second derivatives are eliminated at construction time and the term
alphabet stays at derivative order <= 1, which makes iterated radial
Laplacians terminate in a finite normal form.

Weighted pairwise products factor through the substitution t = rho*xN
into a phi-side moment times a what-side moment, each reduced exactly
to the base moments A1 and B2 by the moment module.  All F-integral
coefficients produced here are exact rationals in the normalization
unit |S^(n-1)| * A1 * B2.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from typing import Dict, Tuple

from .exact import Rat, rat, rat_str, ZERO
from .moments import (
    PHI,
    WHAT,
    DivergentMomentError,
    MomentKey,
    MomentReducer,
)

# term key: (rho_pow, xn_pow, what_deriv, phi_deriv)
TermKey = Tuple[int, int, int, int]

W_HAT = (0, 0, 0, 0)  # what(rho) * phi(rho*xN)
V_NORMAL = (1, 0, 0, 1)  # rho * what(rho) * phi'(rho*xN), the dN factor


@dataclass(frozen=True)
class FIntegralKey:
    kind: int  # 1..4; kind 4 = kind 2 + kind 3
    alpha: int  # odd positive
    beta: int  # even nonnegative

    def __post_init__(self):
        if self.kind not in (1, 2, 3, 4):
            raise ValueError("kind must be 1..4")
        if self.alpha <= 0 or self.alpha % 2 == 0:
            raise ValueError("alpha must be an odd positive integer")
        if self.beta < 0 or self.beta % 2 == 1:
            raise ValueError("beta must be an even nonnegative integer")


class FIntegralDivergenceError(ValueError):
    def __init__(self, message: str, pair=None):
        super().__init__(message)
        self.pair = pair


class TermSum:
    """Canonical dict-backed term combination at a fixed (n, gamma)."""

    __slots__ = ("n", "gamma", "terms")

    def __init__(self, n: int, gamma, terms: Dict[TermKey, Rat] | None = None):
        self.n = int(n)
        self.gamma = rat(gamma)
        self.terms: Dict[TermKey, Rat] = {}
        if terms:
            for key, c in terms.items():
                self.add_term(key, c)

    @classmethod
    def basis(cls, n: int, gamma, key: TermKey = W_HAT) -> "TermSum":
        return cls(n, gamma, {key: rat(1)})

    def add_term(self, key: TermKey, coeff) -> None:
        c = self.terms.get(key, ZERO) + coeff
        if c == 0:
            self.terms.pop(key, None)
        else:
            self.terms[key] = c

    def copy(self) -> "TermSum":
        out = TermSum(self.n, self.gamma)
        out.terms = dict(self.terms)
        return out

    def scaled(self, factor) -> "TermSum":
        out = TermSum(self.n, self.gamma)
        f = rat(factor)
        if f != 0:
            out.terms = {k: c * f for k, c in self.terms.items()}
        return out

    def shifted(self, d_rho: int = 0, d_xn: int = 0) -> "TermSum":
        """Multiply by rho^d_rho * xN^d_xn."""
        out = TermSum(self.n, self.gamma)
        out.terms = {
            (a + d_rho, b + d_xn, i, j): c for (a, b, i, j), c in self.terms.items()
        }
        return out

    def __add__(self, other: "TermSum") -> "TermSum":
        out = self.copy()
        for key, c in other.terms.items():
            out.add_term(key, c)
        return out

    def sorted_items(self):
        return sorted(self.terms.items(), key=lambda kv: kv[0])

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, TermSum)
            and self.n == other.n
            and self.gamma == other.gamma
            and self.terms == other.terms
        )

    def __repr__(self) -> str:
        bits = [
            f"({rat_str(c)})*rho^{a}*xN^{b}*w{i}*p{j}"
            for (a, b, i, j), c in self.sorted_items()
        ]
        return " + ".join(bits) if bits else "0"

    # -- differential operators -------------------------------------------

    def _d_rho_term(self, key: TermKey, coeff):
        """d/d(rho) of one term, second derivatives eliminated by the ODEs."""
        a, b, i, j = key
        g = self.gamma
        out = []
        if a != 0:
            out.append(((a - 1, b, i, j), coeff * a))
        # what-factor derivative
        if i == 0:
            out.append(((a, b, 1, j), coeff))
        else:  # what'' = what - (1+2g)/rho * what'
            out.append(((a, b, 0, j), coeff))
            out.append(((a - 1, b, 1, j), -coeff * (1 + 2 * g)))
        # phi-factor derivative: d/d(rho) phi^(j)(rho xN) = xN phi^(j+1)
        if j == 0:
            out.append(((a, b + 1, i, 1), coeff))
        else:  # xN*phi'' = xN*phi - (1-2g)/rho * phi'
            out.append(((a, b + 1, i, 0), coeff))
            out.append(((a - 1, b, i, 1), -coeff * (1 - 2 * g)))
        return out

    def d_rho(self) -> "TermSum":
        out = TermSum(self.n, self.gamma)
        for key, c in self.terms.items():
            for k2, c2 in self._d_rho_term(key, c):
                out.add_term(k2, c2)
        return out

    def rho_d_rho(self) -> "TermSum":
        """rho * d/d(rho), the radial Euler operator in xi."""
        return self.d_rho().shifted(d_rho=1)

    def d_xn(self) -> "TermSum":
        """d/d(xN); used to form the normal-derivative factor."""
        out = TermSum(self.n, self.gamma)
        for (a, b, i, j), c in self.terms.items():
            if b != 0:
                out.add_term((a, b - 1, i, j), c * b)
            if j == 0:
                out.add_term((a + 1, b, i, 1), c)
            else:
                g = self.gamma
                out.add_term((a + 1, b + 1, i, 0), c)
                out.add_term((a, b, i, 1), -c * (1 - 2 * g))
        return out

    def laplacian(self) -> "TermSum":
        """Radial xi-Laplacian g'' + (n-1)/rho * g'."""
        d1 = self.d_rho()
        return d1.d_rho() + d1.shifted(d_rho=-1).scaled(self.n - 1)

    def laplacian_power(self, m: int) -> "TermSum":
        out = self
        for _ in range(m):
            out = out.laplacian()
        return out

    def neg_laplacian_power(self, m: int) -> "TermSum":
        out = self.laplacian_power(m)
        return out.scaled(-1) if m % 2 else out


def apply_operator(ts: TermSum, op: str, m: int = 1) -> TermSum:
    """Named operator dispatch.

    'radial_laplacian'           -> Laplacian of ts
    'laplacian_power'            -> m-fold Laplacian
    'vector_grad_contraction'    -> R with sum_i int xi_i T (-Lap)^(1+m)(xi_i T)
                                    = int T * R  (radial pairing)
    'normal_deriv_contraction'   -> (-Lap)^(1+m) of the dN factor rho*what*phi'
    """
    if op == "radial_laplacian":
        return ts.laplacian()
    if op == "laplacian_power":
        if m < 1:
            raise ValueError("m must be >= 1")
        return ts.laplacian_power(m)
    if op == "vector_grad_contraction":
        if m < 0:
            raise ValueError("m must be >= 0")
        part1 = ts.neg_laplacian_power(m).rho_d_rho().scaled(-2 * (1 + m))
        part2 = ts.neg_laplacian_power(1 + m).shifted(d_rho=2)
        return part1 + part2
    if op == "normal_deriv_contraction":
        if m < 0:
            raise ValueError("m must be >= 0")
        return ts.d_xn().neg_laplacian_power(1 + m)
    raise ValueError(f"unknown operator {op!r}")


def integrate_pair(
    a: TermSum, b: TermSum, alpha: int, extra_rho_pow: int = 0, reducer=None
) -> Rat:
    """Coefficient of |S^(n-1)|*A1*B2 in the weighted pairing of a and b.

    Computes int_0^inf int_0^inf xN^(alpha-2*gamma) (a*b) rho^(n-1+extra) drho dxN
    by splitting each term product at t = rho*xN into a phi moment times
    a what moment.  Raises FIntegralDivergenceError naming the first
    divergent term pair.
    """
    if (a.n, a.gamma) != (b.n, b.gamma):
        raise ValueError("context mismatch between operands")
    n = a.n
    red = reducer if reducer is not None else MomentReducer(n, a.gamma)
    total = ZERO
    for (a1, b1, i1, j1), c1 in a.sorted_items():
        for (a2, b2, i2, j2), c2 in b.sorted_items():
            phi_key = MomentKey(PHI, alpha + b1 + b2, -2, (j1, j2))
            what_key = MomentKey(
                WHAT, n - 2 + extra_rho_pow + a1 + a2 - alpha - b1 - b2, 2, (i1, i2)
            )
            try:
                m_phi = red.reduce_coeff(phi_key)
                m_what = red.reduce_coeff(what_key)
            except DivergentMomentError as exc:
                pair = ((a1, b1, i1, j1), (a2, b2, i2, j2))
                raise FIntegralDivergenceError(
                    f"divergent pairing of terms {pair}: {exc}", pair
                ) from exc
            total += c1 * c2 * m_phi * m_what
    return total


class FourierContext:
    """Memoized engine state for one (n, gamma) evaluation point."""

    def __init__(self, n: int, gamma):
        self.n = int(n)
        self.gamma = rat(gamma)
        self.reducer = MomentReducer(self.n, self.gamma)
        self._lap_w: Dict[int, TermSum] = {0: TermSum.basis(self.n, self.gamma, W_HAT)}
        self._lap_v: Dict[int, TermSum] = {
            0: TermSum.basis(self.n, self.gamma, V_NORMAL)
        }
        self._f_cache: Dict[FIntegralKey, Rat] = {}
        self._lock = threading.Lock()

    def lap_power(self, base: str, m: int) -> TermSum:
        table = self._lap_w if base == "w" else self._lap_v
        with self._lock:
            top = max(table)
            while top < m:
                table[top + 1] = table[top].laplacian()
                top += 1
            return table[m]

    def f_exact(self, key: FIntegralKey) -> Rat:
        with self._lock:
            if key in self._f_cache:
                return self._f_cache[key]
        value = self._compute_f(key)
        with self._lock:
            self._f_cache[key] = value
        return value

    def _compute_f(self, key: FIntegralKey) -> Rat:
        n, g = self.n, self.gamma
        alpha, beta = key.alpha, key.beta
        m_lap = beta // 2
        w0 = self.lap_power("w", 0)
        if key.kind == 1:
            other = self.lap_power("w", m_lap)
            if m_lap % 2:
                other = other.scaled(-1)
            return integrate_pair(w0, other, alpha, 0, self.reducer)
        if key.kind == 2:
            if beta == 0:
                return integrate_pair(w0, w0, alpha, 2, self.reducer)
            m = m_lap - 1
            contracted = apply_operator(w0, "vector_grad_contraction", m)
            return integrate_pair(w0, contracted, alpha, 0, self.reducer)
        if key.kind == 3:
            v0 = self.lap_power("v", 0)
            other = self.lap_power("v", m_lap)
            if m_lap % 2:
                other = other.scaled(-1)
            return integrate_pair(v0, other, alpha, 0, self.reducer)
        # kind 4
        return self._compute_f(FIntegralKey(2, alpha, beta)) + self._compute_f(
            FIntegralKey(3, alpha, beta)
        )


_contexts: Dict[tuple, FourierContext] = {}
_contexts_lock = threading.Lock()


def get_context(n: int, gamma) -> FourierContext:
    key = (int(n), rat(gamma))
    with _contexts_lock:
        ctx = _contexts.get(key)
        if ctx is None:
            if len(_contexts) > 512:
                _contexts.clear()
            ctx = FourierContext(*key)
            _contexts[key] = ctx
        return ctx


def f_integral_exact(key: FIntegralKey, n: int, gamma) -> Rat:
    """Engine value of F_{kind,n,gamma}(alpha,beta) / (|S^(n-1)| A1 B2)."""
    return get_context(n, gamma).f_exact(key)


# ---------------------------------------------------------------------------
# Printed closed-form table (verbatim transcription, kept separate from the
# engine so the two can disagree and be adjudicated).
# ---------------------------------------------------------------------------


def _r1_14(n, g):
    return (1 - 4 * g**2) * (10 * n**2 - 80 * n + 177 - 12 * g**2)


def _r1_16(n, g):
    return (1 - 4 * g**2) * (
        35 * n**4
        - 700 * n**3
        + 5299 * n**2
        - 17990 * n
        + 23469
        + 80 * g**4
        - 4 * g**2 * (21 * n**2 - 210 * n + 611)
    )


def _r1_34(n, g):
    return (1 - 4 * g**2) * (14 * n**2 - 140 * n + 377 - 12 * g**2)


def _r2_14(n, g):
    return (1 - 4 * g**2) * (10 * n**2 - 40 * n + 57 - 12 * g**2)


def _r2_16(n, g):
    return (1 - 4 * g**2) * (
        35 * n**4
        - 420 * n**3
        + 1939 * n**2
        - 4074 * n
        + 3645
        + 80 * g**4
        - 4 * g**2 * (21 * n**2 - 126 * n + 275)
    )


def _r2_34(n, g):
    return (1 - 4 * g**2) * (14 * n**2 - 84 * n + 153 - 12 * g**2)


def _r2_36(n, g):
    return (1 - 4 * g**2) * (
        9 * (7 * n**4 - 112 * n**3 + 685 * n**2 - 1896 * n + 2105)
        + 80 * g**4
        - 4 * g**2 * (27 * n**2 - 216 * n + 575)
    )


def _r2_54(n, g):
    return (1 - 4 * g**2) * (6 * n**2 - 48 * n + 99 - 4 * g**2)


def _r3_32(n, g):
    return (1 - 2 * g) * (3 * n - 14 - 2 * g * (n + 2))


def _r3_34(n, g):
    return (1 - 2 * g) * (
        42 * n**3
        - 532 * n**2
        + 2103 * n
        - 2844
        + 24 * g**3 * (n + 4)
        - 84 * g**2 * (n - 4)
        - 14 * g * (2 * n**3 - 12 * n**2 + 15 * n + 36)
    )


def _r3_36(n, g):
    return (1 - 2 * g) * (
        9 * (21 * n**5 - 518 * n**4 + 4931 * n**3 - 22922 * n**2 + 52567 * n - 48810)
        - 160 * g**5 * (n + 6)
        + 80 * g**4 * (11 * n - 42)
        + 8 * g**3 * (27 * n**3 - 162 * n**2 - 97 * n + 2550)
        - g**2 * (756 * n**3 - 10584 * n**2 + 50308 * n - 82200)
        - 18 * g * (7 * n**5 - 126 * n**4 + 861 * n**3 - 2534 * n**2 + 2153 * n + 2730)
    )


def _r3_52(n, g):
    return (1 - 2 * g) * ((3 * n - 22) - 2 * g * (n + 2))


def _r3_54(n, g):
    return (1 - 2 * g) * (
        3 * (6 * n**3 - 104 * n**2 + 543 * n - 892)
        + 8 * g**3 * (n + 4)
        - 4 * g**2 * (3 * n**3 + 7 * n - 44)
        + 2 * g * (48 * n**2 - 83 * n - 116)
    )


def _r3_72(n, g):
    return (1 - 2 * g) * (3 * (n - 10) - 2 * g * (n + 2))


_TABLE = {
    # statement of the main F-value lemma
    (1, 1, 2): lambda n, g: (n * (3 * (n - 3) ** 2 + (1 - 4 * g**2)))
    / (3 * (n - 4) * (n - 2 * g - 4) * (n + 2 * g - 4)),
    (1, 1, 4): lambda n, g: (
        n * (n + 2) * (15 * (n - 3) ** 2 * (n - 5) ** 2 + _r1_14(n, g))
    )
    / (
        15
        * (n - 4)
        * (n - 6)
        * (n - 2 * g - 4)
        * (n + 2 * g - 4)
        * (n - 2 * g - 6)
        * (n + 2 * g - 6)
    ),
    (1, 1, 6): lambda n, g: (
        n
        * (n + 2)
        * (n + 4)
        * (35 * (n - 3) ** 2 * (n - 5) ** 2 * (n - 7) ** 2 + _r1_16(n, g))
    )
    / (
        35
        * (n - 4)
        * (n - 6)
        * (n - 8)
        * (n - 2 * g - 4)
        * (n + 2 * g - 4)
        * (n - 2 * g - 6)
        * (n + 2 * g - 6)
        * (n - 2 * g - 8)
        * (n + 2 * g - 8)
    ),
    (2, 3, 2): lambda n, g: (
        (1 - g**2) * 2 * (n + 2) * (5 * (n - 1) * (n - 3) + (1 - 4 * g**2))
    )
    / (15 * (n - 4) * (n - 2 * g - 4) * (n + 2 * g - 4)),
    (3, 3, 2): lambda n, g: (
        2 * (1 - g) * (2 - g) * (5 * (n - 1) * (n - 2) * (n - 3) - _r3_32(n, g))
    )
    / (15 * (n - 4) * (n - 2 * g - 4) * (n + 2 * g - 4)),
    # appendix table; the (n - 2*gamma + 4) factors are transcribed as printed
    (1, 3, 0): lambda n, g: (8 * (n - 3) * (1 - g**2))
    / (3 * (n - 4) * (n - 2 * g - 4) * (n - 2 * g + 4)),
    (1, 3, 2): lambda n, g: (
        8 * (n - 3) * n * (1 - g**2) * (5 * (n - 3) * (n - 5) + (1 - 2 * g) * (1 + 2 * g))
    )
    / (
        15
        * (n - 4)
        * (n - 6)
        * (n - 2 * g - 4)
        * (n - 2 * g + 4)
        * (n - 2 * g - 6)
        * (n + 2 * g - 6)
    ),
    (1, 3, 4): lambda n, g: (
        8
        * (n - 3)
        * n
        * (n + 2)
        * (1 - g**2)
        * (35 * (n - 3) * (n - 5) ** 2 * (n - 7) + _r1_34(n, g))
    )
    / (
        105
        * (n - 4)
        * (n - 6)
        * (n - 8)
        * (n - 2 * g - 4)
        * (n - 2 * g + 4)
        * (n - 2 * g - 6)
        * (n + 2 * g - 6)
        * (n - 2 * g - 8)
        * (n + 2 * g - 8)
    ),
    (1, 5, 0): lambda n, g: (128 * (n - 5) * (n - 3) * (4 - g**2) * (1 - g**2))
    / (
        15
        * (n - 4)
        * (n - 6)
        * (n - 2 * g - 4)
        * (n + 2 * g - 4)
        * (n - 2 * g - 6)
        * (n + 2 * g - 6)
    ),
    (1, 5, 2): lambda n, g: (
        128
        * (n - 5)
        * (n - 3)
        * n
        * (4 - g**2)
        * (1 - g**2)
        * (7 * (n - 3) * (n - 7) + (1 - 2 * g) * (1 + 2 * g))
    )
    / (
        105
        * (n - 4)
        * (n - 6)
        * (n - 8)
        * (n - 2 * g - 4)
        * (n - 2 * g + 4)
        * (n - 2 * g - 6)
        * (n + 2 * g - 6)
        * (n - 2 * g - 8)
        * (n + 2 * g - 8)
    ),
    (1, 7, 0): lambda n, g: (
        1024 * (n - 7) * (n - 5) * (n - 3) * (9 - g**2) * (4 - g**2) * (1 - g**2)
    )
    / (
        35
        * (n - 4)
        * (n - 6)
        * (n - 8)
        * (n - 2 * g - 4)
        * (n - 2 * g + 4)
        * (n - 2 * g - 6)
        * (n + 2 * g - 6)
        * (n - 2 * g - 8)
        * (n + 2 * g - 8)
    ),
    (2, 1, 2): lambda n, g: ((n + 2) * (3 * (n - 1) ** 2 + (1 - 4 * g**2)))
    / (12 * (n - 1)),
    (2, 1, 4): lambda n, g: (
        (n + 2) * (n + 4) * (15 * (n - 1) ** 2 * (n - 3) ** 2 + _r2_14(n, g))
    )
    / (60 * (n - 1) * (n - 4) * (n - 2 * g - 4) * (n + 2 * g - 4)),
    (2, 1, 6): lambda n, g: (
        (n + 2)
        * (n + 4)
        * (n + 6)
        * (35 * (n - 1) ** 2 * (n - 3) ** 2 * (n - 5) ** 2 + _r2_16(n, g))
    )
    / (
        140
        * (n - 1)
        * (n - 4)
        * (n - 6)
        * (n - 2 * g - 4)
        * (n + 2 * g - 4)
        * (n - 2 * g - 6)
        * (n + 2 * g - 6)
    ),
    (2, 3, 4): lambda n, g: (
        2
        * (n + 2)
        * (n + 4)
        * (1 - g**2)
        * (35 * (n - 1) * (n - 3) ** 2 * (n - 5) + _r2_34(n, g))
    )
    / (
        105
        * (n - 4)
        * (n - 6)
        * (n - 2 * g - 4)
        * (n + 2 * g - 4)
        * (n - 2 * g - 6)
        * (n + 2 * g - 6)
    ),
    (2, 3, 6): lambda n, g: (
        2
        * (n + 2)
        * (n + 4)
        * (n + 6)
        * (1 - g**2)
        * (105 * (n - 1) * (n - 3) ** 2 * (n - 5) ** 2 * (n - 7) + _r2_36(n, g))
    )
    / (
        315
        * (n - 4)
        * (n - 6)
        * (n - 8)
        * (n - 2 * g - 4)
        * (n + 2 * g - 4)
        * (n - 2 * g - 6)
        * (n + 2 * g - 6)
        * (n - 2 * g - 8)
        * (n + 2 * g - 8)
    ),
    (2, 5, 0): lambda n, g: (32 * (n - 3) * (4 - g**2) * (1 - g**2))
    / (15 * (n - 4) * (n - 2 * g - 4) * (n + 2 * g - 4)),
    (2, 5, 2): lambda n, g: (
        32
        * (n - 3)
        * (n + 2)
        * (4 - g**2)
        * (1 - g**2)
        * (7 * (n - 1) * (n - 5) + (1 - 2 * g) * (1 + 2 * g))
    )
    / (
        105
        * (n - 4)
        * (n - 6)
        * (n - 2 * g - 4)
        * (n + 2 * g - 4)
        * (n - 2 * g - 6)
        * (n + 2 * g - 6)
    ),
    (2, 5, 4): lambda n, g: (
        32
        * (n - 3)
        * (n + 2)
        * (n + 4)
        * (4 - g**2)
        * (1 - g**2)
        * (21 * (n - 1) * (n - 3) * (n - 5) * (n - 7) + _r2_54(n, g))
    )
    / (
        315
        * (n - 4)
        * (n - 6)
        * (n - 8)
        * (n - 2 * g - 4)
        * (n + 2 * g - 4)
        * (n - 2 * g - 6)
        * (n + 2 * g - 6)
        * (n - 2 * g - 8)
        * (n + 2 * g - 8)
    ),
    (2, 7, 0): lambda n, g: (
        256 * (n - 5) * (n - 3) * (9 - g**2) * (4 - g**2) * (1 - g**2)
    )
    / (
        35
        * (n - 4)
        * (n - 6)
        * (n - 2 * g - 4)
        * (n + 2 * g - 4)
        * (n - 2 * g - 6)
        * (n + 2 * g - 6)
    ),
    (2, 7, 2): lambda n, g: (
        256
        * (n - 5)
        * (n - 3)
        * (n + 2)
        * (9 - g**2)
        * (4 - g**2)
        * (1 - g**2)
        * (9 * (n - 1) * (n - 7) + (1 - 2 * g) * (1 + 2 * g))
    )
    / (
        315
        * (n - 4)
        * (n - 6)
        * (n - 8)
        * (n - 2 * g - 4)
        * (n + 2 * g - 4)
        * (n - 2 * g - 6)
        * (n + 2 * g - 6)
        * (n - 2 * g - 8)
        * (n + 2 * g - 8)
    ),
    (2, 9, 0): lambda n, g: (
        8192 * (n - 7) * (n - 5) * (n - 3) * (16 - g**2) * (9 - g**2) * (4 - g**2) * (1 - g**2)
    )
    / (
        315
        * (n - 4)
        * (n - 6)
        * (n - 8)
        * (n - 2 * g - 4)
        * (n + 2 * g - 4)
        * (n - 2 * g - 6)
        * (n + 2 * g - 6)
        * (n - 2 * g - 8)
        * (n + 2 * g - 8)
    ),
    (3, 3, 4): lambda n, g: (
        2
        * (n + 2)
        * (2 - g)
        * (1 - g)
        * (35 * (n - 1) * (n - 3) ** 2 * (n - 4) * (n - 5) - _r3_34(n, g))
    )
    / (
        105
        * (n - 4)
        * (n - 6)
        * (n - 2 * g - 4)
        * (n + 2 * g - 4)
        * (n - 2 * g - 6)
        * (n + 2 * g - 6)
    ),
    (3, 3, 6): lambda n, g: (
        2
        * (n + 2)
        * (n + 4)
        * (2 - g)
        * (1 - g)
        * (105 * (n - 1) * (n - 3) ** 2 * (n - 5) ** 2 * (n - 6) * (n - 7) - _r3_36(n, g))
    )
    / (
        315
        * (n - 4)
        * (n - 6)
        * (n - 8)
        * (n - 2 * g - 4)
        * (n + 2 * g - 4)
        * (n - 2 * g - 6)
        * (n + 2 * g - 6)
        * (n - 2 * g - 8)
        * (n + 2 * g - 8)
    ),
    (3, 5, 0): lambda n, g: (32 * (n - 3) * (3 - g) * (2 - g) * (1 - g**2))
    / (15 * (n - 4) * (n - 2 * g - 4) * (n + 2 * g - 4)),
    (3, 5, 2): lambda n, g: (
        32
        * (n - 3)
        * (3 - g)
        * (2 - g)
        * (1 - g**2)
        * (7 * (n - 1) * (n - 2) * (n - 5) - _r3_52(n, g))
    )
    / (
        105
        * (n - 4)
        * (n - 6)
        * (n - 2 * g - 4)
        * (n + 2 * g - 4)
        * (n - 2 * g - 6)
        * (n + 2 * g - 6)
    ),
    (3, 5, 4): lambda n, g: (
        32
        * (n - 3)
        * (n + 2)
        * (3 - g)
        * (2 - g)
        * (1 - g**2)
        * (21 * (n - 7) * (n - 5) * (n - 4) * (n - 3) * (n - 1) - _r3_54(n, g))
    )
    / (
        315
        * (n - 4)
        * (n - 6)
        * (n - 8)
        * (n - 2 * g - 4)
        * (n + 2 * g - 4)
        * (n - 2 * g - 6)
        * (n + 2 * g - 6)
        * (n - 2 * g - 8)
        * (n + 2 * g - 8)
    ),
    (3, 7, 0): lambda n, g: (
        256 * (n - 5) * (n - 3) * (4 - g) * (3 - g) * (4 - g**2) * (1 - g**2)
    )
    / (
        35
        * (n - 4)
        * (n - 6)
        * (n - 2 * g - 4)
        * (n + 2 * g - 4)
        * (n - 2 * g - 6)
        * (n + 2 * g - 6)
    ),
    (3, 7, 2): lambda n, g: (
        256
        * (n - 5)
        * (n - 3)
        * (4 - g)
        * (3 - g)
        * (4 - g**2)
        * (1 - g**2)
        * (9 * (n - 7) * (n - 2) * (n - 1) - _r3_72(n, g))
    )
    / (
        315
        * (n - 4)
        * (n - 6)
        * (n - 8)
        * (n - 2 * g - 4)
        * (n + 2 * g - 4)
        * (n - 2 * g - 6)
        * (n + 2 * g - 6)
        * (n - 2 * g - 8)
        * (n + 2 * g - 8)
    ),
    (3, 9, 0): lambda n, g: (
        8192
        * (n - 7)
        * (n - 5)
        * (n - 3)
        * (5 - g)
        * (4 - g)
        * (9 - g**2)
        * (4 - g**2)
        * (1 - g**2)
    )
    / (
        315
        * (n - 4)
        * (n - 6)
        * (n - 8)
        * (n - 2 * g - 4)
        * (n + 2 * g - 4)
        * (n - 2 * g - 6)
        * (n + 2 * g - 6)
        * (n - 2 * g - 8)
        * (n + 2 * g - 8)
    ),
}


def tabulated_keys():
    """All (kind, alpha, beta) keys with a printed closed form."""
    return sorted(_TABLE)


def f_integral_table(key: FIntegralKey, n: int, gamma) -> Rat:
    """Printed closed-form value (transcription, not the engine).

    kind 4 is the sum of the printed kind-2 and kind-3 entries.
    """
    g = rat(gamma)
    n = int(n)
    if key.kind == 4:
        return f_integral_table(FIntegralKey(2, key.alpha, key.beta), n, g) + (
            f_integral_table(FIntegralKey(3, key.alpha, key.beta), n, g)
        )
    fn = _TABLE.get((key.kind, key.alpha, key.beta))
    if fn is None:
        raise KeyError(f"no printed table entry for {key}")
    return fn(n, g)


def f_integral_oracle(key: FIntegralKey, n: int, gamma: float, method: str):
    """Numeric oracle dispatch; see the oracles module for the methods."""
    from . import oracles

    if method == "poisson_physical":
        return oracles.f_integral_poisson(key, n, float(gamma))
    if method == "fourier_fd":
        return oracles.f_integral_fourier_fd(key, n, float(gamma))
    raise ValueError(f"unknown oracle method {method!r}")
