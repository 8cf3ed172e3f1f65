"""Exact algebra of Weyl-symmetric 4-tensors and sphere integration.

A WeylTensor is a dense rank-4 rational tensor with the algebraic Weyl
symmetries: antisymmetry in the first and in the second index pair,
pair-exchange symmetry, the first Bianchi identity and vanishing
contractions.  This module provides the orthogonal projection onto that
symmetry class, the quadratic invariants |W|^2 and the Gram-type
two-tensor Wt, exact integration of polynomials over the unit sphere,
an identity-verification battery, and the radial channel recursions
used by the energy-polynomial assembly.

Sphere integrals are evaluated two ways: a literal monomial route
through `sphere_integrate` (exact double-factorial moments, used in low
dimension) and a contraction route that expands the same moments into
delta-pairings and evaluates tensor contractions (exact in any
dimension, and fast enough for dimension 24).  Where both run, they
must agree exactly.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Tuple

import numpy as np

from .exact import ExactPoly, Rat, rat, rat_str, ZERO

Monomial = Tuple[int, ...]  # exponent vector, one entry per coordinate


# ---------------------------------------------------------------------------
# tensor container and projection
# ---------------------------------------------------------------------------


class WeylTensor:
    """Dense rank-4 tensor over exact rationals with Weyl symmetries."""

    __slots__ = ("dim", "flat")

    def __init__(self, dim: int, flat: List[Rat]):
        self.dim = int(dim)
        if len(flat) != self.dim**4:
            raise ValueError("flat entry list has wrong length")
        self.flat = flat

    def __getitem__(self, idx: Tuple[int, int, int, int]) -> Rat:
        i, j, k, l = idx
        n = self.dim
        return self.flat[((i * n + j) * n + k) * n + l]

    def as_array(self) -> np.ndarray:
        """(n,n,n,n) numpy object array of exact rationals."""
        n = self.dim
        arr = np.empty(n**4, dtype=object)
        arr[:] = self.flat
        return arr.reshape(n, n, n, n)

    def int_scaled(self) -> Tuple[np.ndarray, int]:
        """Integer-rescaled copy (entries * L, L) for fast exact contraction."""
        L = 1
        for c in self.flat:
            d = int(c.denominator)
            if d != 1:
                g = _gcd(L, d)
                L = L // g * d
        n = self.dim
        arr = np.empty(n**4, dtype=object)
        arr[:] = [int(c.numerator) * (L // int(c.denominator)) for c in self.flat]
        return arr.reshape(n, n, n, n), L


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def _idx(n: int, i: int, j: int, k: int, l: int) -> int:
    return ((i * n + j) * n + k) * n + l


def project_weyl(raw: Iterable, dim: int) -> WeylTensor:
    """Orthogonal projection of a raw rank-4 array onto the Weyl class.

    Steps: antisymmetrize both index pairs, symmetrize pair exchange,
    remove the totally antisymmetric obstruction to the first Bianchi
    identity, then subtract the Kulkarni-Nomizu trace part.  Idempotent
    and exact; dimensions 2 and 3 project to zero.
    """
    n = int(dim)
    if n < 2:
        raise ValueError("dim must be >= 2")
    raw = [rat(c) for c in raw]
    if len(raw) != n**4:
        raise ValueError("raw entry list must have dim^4 entries")

    def g(i, j, k, l):
        return raw[_idx(n, i, j, k, l)]

    # antisymmetrize (i,j) and (k,l), then symmetrize pair exchange
    t1 = [ZERO] * n**4
    quarter = rat(1, 4)
    for i in range(n):
        for j in range(n):
            for k in range(n):
                for l in range(n):
                    t1[_idx(n, i, j, k, l)] = quarter * (
                        g(i, j, k, l) - g(j, i, k, l) - g(i, j, l, k) + g(j, i, l, k)
                    )
    t2 = [ZERO] * n**4
    half = rat(1, 2)
    for i in range(n):
        for j in range(n):
            for k in range(n):
                for l in range(n):
                    t2[_idx(n, i, j, k, l)] = half * (
                        t1[_idx(n, i, j, k, l)] + t1[_idx(n, k, l, i, j)]
                    )

    # Bianchi projection: subtract the cyclic (totally antisymmetric) part
    t3 = [ZERO] * n**4
    third = rat(1, 3)
    for i in range(n):
        for j in range(n):
            for k in range(n):
                for l in range(n):
                    cyc = (
                        t2[_idx(n, i, j, k, l)]
                        + t2[_idx(n, i, k, l, j)]
                        + t2[_idx(n, i, l, j, k)]
                    )
                    t3[_idx(n, i, j, k, l)] = t2[_idx(n, i, j, k, l)] - third * cyc

    # trace removal via the Kulkarni-Nomizu construction
    ric = [[ZERO] * n for _ in range(n)]
    for j in range(n):
        for l in range(n):
            s = ZERO
            for i in range(n):
                s += t3[_idx(n, i, j, i, l)]
            ric[j][l] = s
    scal = sum((ric[j][j] for j in range(n)), ZERO)

    out = list(t3)
    if n > 2:
        ric0 = [[ric[j][l] - (scal / n if j == l else ZERO) for l in range(n)] for j in range(n)]
        c1 = rat(1, n - 2)
        c2 = scal / (2 * n * (n - 1))
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    for l in range(n):
                        kn = (
                            (ric0[i][k] if j == l else ZERO)
                            + (ric0[j][l] if i == k else ZERO)
                            - (ric0[i][l] if j == k else ZERO)
                            - (ric0[j][k] if i == l else ZERO)
                        )
                        gg = (
                            (rat(2) if (i == k and j == l) else ZERO)
                            - (rat(2) if (i == l and j == k) else ZERO)
                        )
                        out[_idx(n, i, j, k, l)] -= c1 * kn + c2 * gg
    else:
        gg_coeff = scal / (2 * n * (n - 1))
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    for l in range(n):
                        gg = (
                            (rat(2) if (i == k and j == l) else ZERO)
                            - (rat(2) if (i == l and j == k) else ZERO)
                        )
                        out[_idx(n, i, j, k, l)] -= gg_coeff * gg
    return WeylTensor(n, out)


def random_weyl(dim: int, seed: int, denominator_bound: int = 10) -> WeylTensor:
    """Weyl projection of a PRNG rational tensor (seed fully determines it)."""
    rng = random.Random(seed)
    raw = [
        rat(rng.randint(-9, 9), rng.randint(1, denominator_bound))
        for _ in range(dim**4)
    ]
    return project_weyl(raw, dim)


def check_symmetries(w: WeylTensor) -> Dict[str, bool]:
    """Exact check of the four invariant families."""
    n = w.dim
    anti = pair = bianchi = True
    for i in range(n):
        for j in range(n):
            for k in range(n):
                for l in range(n):
                    v = w[i, j, k, l]
                    if v != -w[j, i, k, l] or v != -w[i, j, l, k]:
                        anti = False
                    if v != w[k, l, i, j]:
                        pair = False
                    if v + w[i, k, l, j] + w[i, l, j, k] != 0:
                        bianchi = False
    traces = True
    for j in range(n):
        for l in range(n):
            s = ZERO
            for i in range(n):
                s += w[i, j, i, l]
            if s != 0:
                traces = False
    return {
        "antisymmetry": anti,
        "pair_symmetry": pair,
        "bianchi": bianchi,
        "zero_contraction": traces,
    }


# ---------------------------------------------------------------------------
# invariants
# ---------------------------------------------------------------------------


def weyl_invariants(w: WeylTensor):
    """(|W|^2, Wt) with Wt_ij = sum (W_ikpq + W_kqip)(W_jkpq + W_kqjp)."""
    n = w.dim
    W4, L = w.int_scaled()
    Wt_int = _wtilde_int(W4, n)
    P = np.einsum("ikjl->ijkl", W4) + np.einsum("iljk->ijkl", W4)
    norm_int = int(np.tensordot(P.reshape(-1), P.reshape(-1), axes=1))
    L2 = L * L
    norm = rat(norm_int, L2)
    wt = [[rat(int(Wt_int[i, j]), L2) for j in range(n)] for i in range(n)]
    return norm, wt


def _wtilde_int(W4: np.ndarray, n: int) -> np.ndarray:
    p = np.einsum("ikpq->ikpq", W4) + np.einsum("kqip->ikpq", W4)
    flatp = p.reshape(n, n**3)
    return flatp @ flatp.T


def leading_principal_minors(mat: List[List[Rat]]) -> List[Rat]:
    """Exact leading principal minors via fraction-free elimination."""
    n = len(mat)
    out = []
    for k in range(1, n + 1):
        sub = [[mat[i][j] for j in range(k)] for i in range(k)]
        det = rat(1)
        sign_acc = 1
        for col in range(k):
            piv_row = next((r for r in range(col, k) if sub[r][col] != 0), None)
            if piv_row is None:
                det = ZERO
                break
            if piv_row != col:
                sub[col], sub[piv_row] = sub[piv_row], sub[col]
                sign_acc = -sign_acc
            piv = sub[col][col]
            det *= piv
            for r in range(col + 1, k):
                f = sub[r][col] / piv
                if f != 0:
                    sub[r] = [x - f * y for x, y in zip(sub[r], sub[col])]
        out.append(det * sign_acc if det != 0 else ZERO)
    return out


# ---------------------------------------------------------------------------
# sphere integration of polynomials (monomial route)
# ---------------------------------------------------------------------------


def _double_factorial(k: int) -> int:
    out = 1
    while k > 1:
        out *= k
        k -= 2
    return out


def sphere_integrate(poly: Dict[Monomial, Rat], dim: int) -> Rat:
    """Coefficient of |S^(dim-1)| in the sphere integral of a polynomial.

    Monomials with any odd exponent integrate to zero; an even monomial
    x^(2a) contributes prod (2a_i - 1)!! / prod_{k=0}^{|a|-1} (dim + 2k).
    """
    total = ZERO
    for exps, coeff in poly.items():
        if coeff == 0:
            continue
        if any(e % 2 for e in exps):
            continue
        num = 1
        half_total = 0
        for e in exps:
            if e:
                num *= _double_factorial(e - 1)
                half_total += e // 2
        den = 1
        for k in range(half_total):
            den *= dim + 2 * k
        total += coeff * rat(num, den)
    return total


def poly_mul(p: Dict[Monomial, Rat], q: Dict[Monomial, Rat]) -> Dict[Monomial, Rat]:
    out: Dict[Monomial, Rat] = {}
    for e1, c1 in p.items():
        for e2, c2 in q.items():
            e = tuple(a + b for a, b in zip(e1, e2))
            v = out.get(e, ZERO) + c1 * c2
            if v == 0:
                out.pop(e, None)
            else:
                out[e] = v
    return out


def poly_add_into(acc: Dict[Monomial, Rat], p: Dict[Monomial, Rat], scale=1) -> None:
    for e, c in p.items():
        v = acc.get(e, ZERO) + c * scale
        if v == 0:
            acc.pop(e, None)
        else:
            acc[e] = v


def h_polynomial(w: WeylTensor, i: int, j: int) -> Dict[Monomial, Rat]:
    """H_ij(x) = W_ikjl x^k x^l as a sparse polynomial."""
    n = w.dim
    out: Dict[Monomial, Rat] = {}
    for k in range(n):
        for l in range(n):
            c = w[i, k, j, l]
            if c == 0:
                continue
            e = [0] * n
            e[k] += 1
            e[l] += 1
            key = tuple(e)
            v = out.get(key, ZERO) + c
            if v == 0:
                out.pop(key, None)
            else:
                out[key] = v
    return out


def dh_polynomial(w: WeylTensor, k: int, i: int, j: int) -> Dict[Monomial, Rat]:
    """d_k H_ij(x) = (W_ikjl + W_iljk) x^l."""
    n = w.dim
    out: Dict[Monomial, Rat] = {}
    for l in range(n):
        c = w[i, k, j, l] + w[i, l, j, k]
        if c == 0:
            continue
        e = [0] * n
        e[l] = 1
        out[tuple(e)] = c
    return out


# ---------------------------------------------------------------------------
# contraction primitives (exact in any dimension)
# ---------------------------------------------------------------------------


@dataclass
class _ContractionCache:
    """Integer-scaled contraction values for one tensor."""

    n: int
    L: int
    W4: np.ndarray  # object array of scaled integers
    values: dict = field(default_factory=dict)

    @classmethod
    def of(cls, w: WeylTensor) -> "_ContractionCache":
        W4, L = w.int_scaled()
        return cls(w.dim, L, W4)

    def norm_sq(self) -> Rat:
        if "norm" not in self.values:
            P = np.einsum("ikjl->ijkl", self.W4) + np.einsum("iljk->ijkl", self.W4)
            v = int(np.tensordot(P.reshape(-1), P.reshape(-1), axes=1))
            self.values["norm"] = rat(v, self.L * self.L)
        return self.values["norm"]

    def wtilde(self) -> np.ndarray:
        """Wt as an object array of rationals."""
        if "wt" not in self.values:
            wt_int = _wtilde_int(self.W4, self.n)
            self.values["wt"] = _to_rat_matrix(wt_int, self.L * self.L)
        return self.values["wt"]

    def u_matrix(self) -> np.ndarray:
        """U_ij = sum_{pql} W_piql W_pjql."""
        if "u" not in self.values:
            Wp = np.einsum("piql->ipql", self.W4).reshape(self.n, -1)
            self.values["u"] = _to_rat_matrix(Wp @ Wp.T, self.L * self.L)
        return self.values["u"]

    def x_matrix(self) -> np.ndarray:
        """X_ij = sum_{pqt} W_piqt W_ptqj."""
        if "x" not in self.values:
            A = np.einsum("piqt->ipqt", self.W4).reshape(self.n, -1)
            B = np.einsum("ptqj->jpqt", self.W4).reshape(self.n, -1)
            self.values["x"] = _to_rat_matrix(A @ B.T, self.L * self.L)
        return self.values["x"]

    def pair_scalars(self) -> Tuple[Rat, Rat]:
        """(S_A, S_B) = (sum W_pkql^2, sum W_pkql W_plqk)."""
        if "sab" not in self.values:
            fa = self.W4.reshape(-1)
            sa = int(np.tensordot(fa, fa, axes=1))
            Wb = np.einsum("plqk->pkql", self.W4).reshape(-1)
            sb = int(np.tensordot(fa, Wb, axes=1))
            L2 = self.L * self.L
            self.values["sab"] = (rat(sa, L2), rat(sb, L2))
        return self.values["sab"]


def _to_rat_matrix(int_mat: np.ndarray, denom: int) -> np.ndarray:
    n = int_mat.shape[0]
    out = np.empty((n, n), dtype=object)
    for i in range(n):
        for j in range(n):
            out[i, j] = rat(int(int_mat[i, j]), denom)
    return out


def _rat_eye(n: int) -> np.ndarray:
    out = np.empty((n, n), dtype=object)
    for i in range(n):
        for j in range(n):
            out[i, j] = rat(1) if i == j else ZERO
    return out


def _mat_equal(a: np.ndarray, b: np.ndarray) -> bool:
    n = a.shape[0]
    return all(a[i, j] == b[i, j] for i in range(n) for j in range(n))


def _mat_trace(a: np.ndarray) -> Rat:
    return sum((a[i, i] for i in range(a.shape[0])), ZERO)


# ---------------------------------------------------------------------------
# identity battery
# ---------------------------------------------------------------------------


@dataclass
class IdentityReport:
    identity: str
    dim: int
    seed: Optional[int]
    lhs: str  # canonical scalar (trace for matrix identities), 'p/q'
    rhs: str
    equal: bool


def _pairings(slots: List[int]) -> List[List[Tuple[int, int]]]:
    """All perfect matchings of an even slot list."""
    if not slots:
        return [[]]
    first, rest = slots[0], slots[1:]
    out = []
    for idx, partner in enumerate(rest):
        remaining = rest[:idx] + rest[idx + 1 :]
        for sub in _pairings(remaining):
            out.append([(first, partner)] + sub)
    return out


def _moment_norm(n: int, pairs: int) -> Rat:
    """1 / prod_{k=0}^{pairs-1} (n + 2k): the pairing weight of a sphere moment."""
    den = 1
    for k in range(pairs):
        den *= n + 2 * k
    return rat(1, den)


class IdentityChecker:
    """Verifies the printed sphere identities exactly for one tensor.

    Low dimensions (dim <= monomial_dim_max) additionally recompute every
    left-hand side through the literal monomial route and require exact
    agreement with the contraction route.
    """

    def __init__(self, w: WeylTensor, monomial_dim_max: int = 6):
        self.w = w
        self.n = w.dim
        self.cache = _ContractionCache.of(w)
        self.use_monomials = w.dim <= monomial_dim_max

    # -- contraction-route left-hand sides ---------------------------------

    def _lhs_h_sq(self) -> Rat:
        sa, sb = self.cache.pair_scalars()
        return (sa + sb) * _moment_norm(self.n, 2)

    def _lhs_dh_sq(self) -> Rat:
        sa, sb = self.cache.pair_scalars()
        return (2 * sa + 2 * sb) * _moment_norm(self.n, 1)

    def _lhs_xx_h_sq(self) -> np.ndarray:
        n = self.n
        sa, sb = self.cache.pair_scalars()
        u = self.cache.u_matrix()
        x = self.cache.x_matrix()
        norm = _moment_norm(n, 3)
        out = np.empty((n, n), dtype=object)
        for i in range(n):
            for j in range(n):
                diag = sa + sb if i == j else ZERO
                out[i, j] = (diag + 4 * u[i, j] + 4 * x[i, j]) * norm
        return out

    def _lhs_xx_dh_sq(self) -> np.ndarray:
        n = self.n
        sa, sb = self.cache.pair_scalars()
        u = self.cache.u_matrix()
        x = self.cache.x_matrix()
        norm = _moment_norm(n, 2)
        out = np.empty((n, n), dtype=object)
        for i in range(n):
            for j in range(n):
                diag = 2 * (sa + sb) if i == j else ZERO
                out[i, j] = (diag + 2 * (2 * u[i, j] + 2 * x[i, j])) * norm
        return out

    def _lhs_x_h_dh(self) -> np.ndarray:
        n = self.n
        u = self.cache.u_matrix()
        x = self.cache.x_matrix()
        norm = _moment_norm(n, 2)
        out = np.empty((n, n), dtype=object)
        for i in range(n):
            for j in range(n):
                out[i, j] = 2 * (u[i, j] + x[i, j]) * norm
        return out

    def _lhs_dh_dh(self) -> np.ndarray:
        n = self.n
        u = self.cache.u_matrix()
        x = self.cache.x_matrix()
        norm = _moment_norm(n, 1)
        out = np.empty((n, n), dtype=object)
        for i in range(n):
            for j in range(n):
                out[i, j] = 2 * (u[i, j] + x[i, j]) * norm
        return out

    def _lhs_x_dh_ddh(self) -> np.ndarray:
        # same contraction pattern as dh_dh: (W_pkqi + W_piqk)(W_pjqk + W_pkqj)
        return self._lhs_dh_dh()

    def _lhs_h_ddh(self) -> np.ndarray:
        n = self.n
        W4, L = self.cache.W4, self.cache.L
        # sum_pq (sum_k W_pkqk) (W_piqj + W_pjqi) / n : first factor is a trace
        tr = np.einsum("pkqk->pq", W4)
        A = np.einsum("piqj->ijpq", W4) + np.einsum("pjqi->ijpq", W4)
        out = np.empty((n, n), dtype=object)
        norm = _moment_norm(n, 1)
        for i in range(n):
            for j in range(n):
                v = int(np.tensordot(tr.reshape(-1), A[i, j].reshape(-1), axes=1))
                out[i, j] = rat(v, L * L) * norm
        return out

    def _lhs_h_slice_gram(self) -> np.ndarray:
        """sum_l int H_il H_jl dS (the translated-energy kernel nucleus)."""
        n = self.n
        W4, L = self.cache.W4, self.cache.L
        # pairings of {k,s,k',s'} in W_ikls W_jk'ls': (k,s)(k',s') kills by
        # contraction; (k,k')(s,s') gives U; (k,s')(s,k') gives Y
        A = np.einsum("ikls->ikls", W4).reshape(n, -1)
        B = np.einsum("jkls->jkls", W4).reshape(n, -1)
        u_like = A @ B.T  # sum_{kls} W_ikls W_jkls
        C = np.einsum("jslk->jkls", W4).reshape(n, -1)
        y_like = A @ C.T  # sum_{kls} W_ikls W_jslk
        norm = _moment_norm(n, 2)
        out = np.empty((n, n), dtype=object)
        for i in range(n):
            for j in range(n):
                out[i, j] = rat(int(u_like[i, j] + y_like[i, j]), L * L) * norm
        return out

    # -- monomial-route recomputation (low dimensions) ---------------------

    def _mono_scalar(self, integrand: Dict[Monomial, Rat]) -> Rat:
        return sphere_integrate(integrand, self.n)

    def _mono_h_sq(self) -> Dict[Monomial, Rat]:
        n, w = self.n, self.w
        acc: Dict[Monomial, Rat] = {}
        for p in range(n):
            for q in range(n):
                hp = h_polynomial(w, p, q)
                if hp:
                    poly_add_into(acc, poly_mul(hp, hp))
        return acc

    def _mono_dh_sq(self) -> Dict[Monomial, Rat]:
        n, w = self.n, self.w
        acc: Dict[Monomial, Rat] = {}
        for k in range(n):
            for p in range(n):
                for q in range(n):
                    dp = dh_polynomial(w, k, p, q)
                    if dp:
                        poly_add_into(acc, poly_mul(dp, dp))
        return acc

    def _with_x(self, poly: Dict[Monomial, Rat], *vars_: int) -> Dict[Monomial, Rat]:
        out: Dict[Monomial, Rat] = {}
        for e, c in poly.items():
            e2 = list(e)
            for v in vars_:
                e2[v] += 1
            out[tuple(e2)] = c
        return out

    # -- battery ------------------------------------------------------------

    def run(self, seed: Optional[int] = None, taus=None) -> List[IdentityReport]:
        n = self.n
        reports: List[IdentityReport] = []
        norm_sq = self.cache.norm_sq()
        wt = self.cache.wtilde()
        eye = _rat_eye(n)

        def scalar_row(name, lhs, rhs):
            reports.append(
                IdentityReport(name, n, seed, rat_str(lhs), rat_str(rhs), lhs == rhs)
            )

        def matrix_row(name, lhs, rhs):
            reports.append(
                IdentityReport(
                    name,
                    n,
                    seed,
                    rat_str(_mat_trace(lhs)),
                    rat_str(_mat_trace(rhs)),
                    _mat_equal(lhs, rhs),
                )
            )

        # Lemma J-zero-a
        lhs_h2 = self._lhs_h_sq()
        lhs_dh2 = self._lhs_dh_sq()
        if self.use_monomials:
            assert lhs_h2 == self._mono_scalar(self._mono_h_sq())
            assert lhs_dh2 == self._mono_scalar(self._mono_dh_sq())
        scalar_row("j_zero_a_h_sq", lhs_h2, norm_sq / (2 * n * (n + 2)))
        scalar_row("j_zero_a_dh_sq", lhs_dh2, norm_sq / n)

        # Lemma J-sec-2, five displays
        rhs1 = np.empty((n, n), dtype=object)
        rhs2 = np.empty((n, n), dtype=object)
        for i in range(n):
            for j in range(n):
                d = norm_sq if i == j else ZERO
                rhs1[i, j] = d / (2 * n * (n + 2) * (n + 4)) + 2 * wt[i, j] / (
                    n * (n + 2) * (n + 4)
                )
                rhs2[i, j] = d / (n * (n + 2)) + 2 * wt[i, j] / (n * (n + 2))
        lhs1 = self._lhs_xx_h_sq()
        lhs2 = self._lhs_xx_dh_sq()
        lhs3 = self._lhs_x_h_dh()
        lhs4 = self._lhs_dh_dh()
        lhs5 = self._lhs_x_dh_ddh()
        lhs6 = self._lhs_h_ddh()
        if self.use_monomials:
            h2 = self._mono_h_sq()
            dh2 = self._mono_dh_sq()
            i0, j0 = 0, min(1, n - 1)
            assert lhs1[i0, j0] == self._mono_scalar(self._with_x(h2, i0, j0))
            assert lhs2[i0, j0] == self._mono_scalar(self._with_x(dh2, i0, j0))
            acc: Dict[Monomial, Rat] = {}
            for p in range(n):
                for q in range(n):
                    hp = h_polynomial(self.w, p, q)
                    if hp:
                        poly_add_into(acc, poly_mul(hp, dh_polynomial(self.w, j0, p, q)))
            assert lhs3[i0, j0] == self._mono_scalar(self._with_x(acc, i0))
        matrix_row("j_sec_2_xx_h_sq", lhs1, rhs1)
        matrix_row("j_sec_2_xx_dh_sq", lhs2, rhs2)
        matrix_row("j_sec_2_x_h_dh", lhs3, wt * rat(1, n * (n + 2)))
        matrix_row("j_sec_2_dh_dh", lhs4, wt * rat(1, n))
        # the printed chain relates the three mixed displays by 1/(n+2) steps
        matrix_row("j_sec_2_chain_a", lhs4, lhs3 * rat(n + 2))
        matrix_row("j_sec_2_chain_b", lhs5, lhs3 * rat(n + 2))
        matrix_row("j_sec_2_h_ddh", lhs6, eye * ZERO)

        # translated-energy kernel nucleus (Hessian block normalization)
        matrix_row(
            "h_slice_gram",
            self._lhs_h_slice_gram(),
            wt * rat(1, 2 * n * (n + 2)),
        )

        # sphere vanishing of the first-order energy coupling
        for t in range(0, 5):
            tau = None if taus is None else taus.get(t)
            val = energy_coupling_integral(self.w, t, tau)
            scalar_row(f"energy_exp_b_t{t}", val, ZERO)

        return reports


# ---------------------------------------------------------------------------
# radial channel recursions for iterated Laplacians of the squared gradient
# of the modulated tensor field f(|x|^2) H(x)
# ---------------------------------------------------------------------------


def _lap_radial(p: ExactPoly, c: int) -> ExactPoly:
    """s-space image of G'' + (c/r) G' for G(r) = p(r^2): 4 s p'' + (2 + 2c) p'."""
    d1 = p.derive()
    return ExactPoly([0, 4], p.var) * d1.derive() + (2 + 2 * c) * d1


def g_recursion(
    f_coeffs: Iterable, n: int, m_max: int, family: str = "G"
) -> List[tuple]:
    """Per-m radial channel polynomials in s = r^2.

    family 'G': triples (G1_m, G2_m, G3_m) multiplying sum (dH)^2, sum H^2
    and |W|^2 in the m-fold Laplacian of sum_k (d_k (f H))^2.  Base case:
    G1_0 = f^2, G2_0 = 8 f f' + 4 s f'^2, G3_0 = 0; one Laplacian couples
    the channels through the radial operators with c = n+3, n+7, n-1.

    family 'G_tilde': 11-tuples, the channel coefficients of the second
    translation derivative d_ij applied to the same scalar, obtained by
    differentiating the G channels (d_ij commutes with the Laplacian):

        [p S] |-> (4 p'' x_i x_j + 2 p' delta_ij) S
                  + 2 p' (x_i d_j S + x_j d_i S) + p d_ij S

    which lands on the channel basis delta*[ (dH)^2, H^2, |W|^2 ],
    x_i(H dH)+x_j(H dH), dH_i dH_j, x_i(dH ddH)+x_j(dH ddH), Wt,
    x_i x_j*[ (dH)^2, H^2, |W|^2 ], H ddH  in that order.
    """
    coeff_list = [rat(c) for c in f_coeffs]
    d0 = len(coeff_list) - 1  # declared degree; trailing zeros allowed
    f = ExactPoly(coeff_list, "s")
    if not (0 <= d0 <= 4):
        raise ValueError("f must have declared degree between 0 and 4")
    if m_max > 2 * d0 + 2:
        raise ValueError("m_max out of range (annihilation bound exceeded)")
    fp = f.derive()
    p1 = f * f
    p2 = 8 * (f * fp) + ExactPoly([0, 4], "s") * (fp * fp)
    p3 = ExactPoly([], "s")
    chans = [(p1, p2, p3)]
    for _ in range(max(m_max, 0)):
        p1n = _lap_radial(p1, n + 3) + 2 * p2
        p2n = _lap_radial(p2, n + 7)
        p3n = _lap_radial(p3, n - 1) + 2 * p1
        p1, p2, p3 = p1n, p2n, p3n
        chans.append((p1, p2, p3))
    if family == "G":
        return chans
    if family != "G_tilde":
        raise ValueError(f"unknown family {family!r}")
    out = []
    for (q1, q2, q3) in chans:
        d1, d2, d3 = q1.derive(), q2.derive(), q3.derive()
        out.append(
            (
                2 * d1,  # delta_ij (dH)^2
                2 * d2,  # delta_ij H^2
                2 * d3,  # delta_ij |W|^2
                4 * d2,  # x_i (H d_j H) + x_j (H d_i H)
                2 * q2,  # d_i H d_j H
                4 * d1,  # x_i (d_k H d_jk H) + x_j (...)
                2 * q1,  # Wt_ij
                4 * d1.derive(),  # x_i x_j (dH)^2
                4 * d2.derive(),  # x_i x_j H^2
                4 * d3.derive(),  # x_i x_j |W|^2
                2 * q2,  # H d_ij H
            )
        )
    return out


def sphere_average_radial(f_coeffs, n: int, m: int, family: str = "G"):
    """Exact sphere-averaged radial profile of the channel combination.

    family 'G': returns the ExactPoly Phi_m(s) with

        int_{S(0,r)} Lap^m sum (d(fH))^2 dS_r
            = |S^{n-1}| |W|^2 r^{n-1} Phi_m(r^2),

    using the sphere values sum (dH)^2 -> r^2/n and sum H^2 ->
    r^4/(2n(n+2)) per unit |W|^2.

    family 'G_tilde': returns the pair (Psi1_m, Psi2_m) with

        int_{S(0,r)} Lap^m d_ij sum (d(fH))^2 dS_r
            = |S^{n-1}| r^{n-1} [ Psi1_m(r^2) Wt_ij + Psi2_m(r^2) delta_ij |W|^2 ].
    """
    if family == "G":
        p1, p2, p3 = g_recursion(f_coeffs, n, m, "G")[m]
        s = ExactPoly([0, 1], "s")
        return s * p1 * rat(1, n) + (s * s) * p2 * rat(1, 2 * n * (n + 2)) + p3
    if family != "G_tilde":
        raise ValueError(f"unknown family {family!r}")
    g1, g2, g3, g4, g5, g6, g7, g8, g9, g10, _g11 = g_recursion(
        f_coeffs, n, m, "G_tilde"
    )[m]
    s = ExactPoly([0, 1], "s")
    s2, s3 = s * s, s * s * s
    # Wt channel: sphere values (per unit Wt, homogeneity powers included)
    psi1 = (
        s2 * g4 * rat(2, n * (n + 2))
        + s * g5 * rat(1, n)
        + s * g6 * rat(2, n)
        + g7
        + s2 * g8 * rat(2, n * (n + 2))
        + s3 * g9 * rat(2, n * (n + 2) * (n + 4))
    )
    # delta_ij |W|^2 channel
    psi2 = (
        s * g1 * rat(1, n)
        + s2 * g2 * rat(1, 2 * n * (n + 2))
        + g3
        + s2 * g8 * rat(1, n * (n + 2))
        + s3 * g9 * rat(1, 2 * n * (n + 2) * (n + 4))
        + s * g10 * rat(1, n)
    )
    return psi1, psi2


def energy_coupling_integral(w: WeylTensor, t: int, tau=None) -> Rat:
    """Exact sphere integral of W_ikjl x^i x^j (x+tau)^k (x+tau)^l (x.tau)^t.

    Evaluated by expanding the sphere moments into delta-pairings and
    contracting; works in any dimension.  The result is the coefficient
    of |S^(n-1)|.  tau defaults to a fixed rational direction.
    """
    n = w.dim
    if tau is None:
        tau = [rat(1 + (k % 3), 3) for k in range(n)]
    tau = [rat(v) for v in tau]
    if len(tau) != n:
        raise ValueError("tau must have dim components")
    W4, L = w.int_scaled()
    Lt = 1
    for v in tau:
        d = int(v.denominator)
        g = _gcd(Lt, d)
        Lt = Lt // g * d
    tvec = np.empty(n, dtype=object)
    tvec[:] = [int(v.numerator) * (Lt // int(v.denominator)) for v in tau]
    tau_sq_int = int(np.tensordot(tvec, tvec, axes=1))  # (tau.tau) * Lt^2

    def contract(slots_tau: Tuple[int, ...], delta_pairs) -> int:
        """W dotted with tau on slots_tau, then delta-traced; integer-scaled."""
        T = W4
        alive = [s for s in range(4)]
        for s in sorted(slots_tau, reverse=True):
            T = np.tensordot(T, tvec, axes=([alive.index(s)], [0]))
            alive.remove(s)
        for a, b in delta_pairs:
            ia, ib = alive.index(a), alive.index(b)
            T = np.trace(T, axis1=min(ia, ib), axis2=max(ia, ib))
            alive.remove(a)
            alive.remove(b)
        return int(T)

    pattern_cache: Dict[tuple, int] = {}

    def pattern_value(slots_tau, delta_pairs) -> int:
        key = (tuple(sorted(slots_tau)), tuple(sorted(map(tuple, map(sorted, delta_pairs)))))
        if key not in pattern_cache:
            pattern_cache[key] = contract(key[0], key[1])
        return pattern_cache[key]

    # pieces of (x^k + tau^k)(x^l + tau^l): decide whether W slots 1 (=k)
    # and 3 (=l) carry x or tau; slots 0 (=i) and 2 (=j) always carry x
    total = ZERO
    for k_is_x in (True, False):
        for l_is_x in (True, False):
            x_slots = [0, 2] + ([1] if k_is_x else []) + ([3] if l_is_x else [])
            tau_fixed = tuple(
                s for s in (1, 3) if (s == 1 and not k_is_x) or (s == 3 and not l_is_x)
            )
            deg = len(x_slots) + t
            if deg % 2:
                continue  # odd-degree monomials integrate to zero
            weight_den = 1
            for kk in range(deg // 2):
                weight_den *= n + 2 * kk
            # pairing labels: W x-slots first, then the t factors of (x.tau)
            labels = list(range(deg))
            piece = 0  # integer, uniformly scaled by L * Lt^(len(tau_fixed)+t)
            for match in _pairings(labels):
                w_tau_extra = []
                delta_pairs = []
                tau_tau = 0
                for a, b in match:
                    a_w = a < len(x_slots)
                    b_w = b < len(x_slots)
                    if a_w and b_w:
                        delta_pairs.append((x_slots[a], x_slots[b]))
                    elif a_w != b_w:
                        w_tau_extra.append(x_slots[a] if a_w else x_slots[b])
                    else:
                        tau_tau += 1
                slots_tau = tuple(sorted(tau_fixed + tuple(w_tau_extra)))
                piece += pattern_value(slots_tau, delta_pairs) * tau_sq_int**tau_tau
            n_tau = len(tau_fixed) + t
            total += rat(piece) / (rat(L) * rat(Lt) ** n_tau * weight_den)
    return total
