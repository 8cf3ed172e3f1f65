"""Critical-point analysis of the reduced-energy polynomial family.

For the pinned profile families (linear for large n, quartic for
24 <= n <= 51) the derivative P'(1) is a quadratic Q in the free
constant coefficient a0.  This module extracts Q by exact
interpolation, computes its discriminant, selects the root a0~ in the
real quadratic field Q(sqrt(disc)), certifies the local-minimizer
conditions by exact sign tests, bisects the transition exponent where
disc(Q)(24, .) changes sign, and sweeps dimension/order grids.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from .exact import (
    ExactPoly,
    QuadExtScalar,
    Rat,
    rat,
    rat_str,
    root_isolate,
    sign,
)
from .energy import assemble_P, assemble_P_tilde, f_for_d0


class InterpolationInconsistency(RuntimeError):
    """A supposedly quadratic family failed the degree check."""


class NoRealCriticalCoefficient(ValueError):
    """disc(Q) < 0: no real root a0~ exists."""


@dataclass
class QuadraticQ:
    b0: Rat
    b1: Rat
    b2: Rat
    n: int
    gamma: Rat
    d0: int

    def eval(self, a0):
        a0 = rat(a0)
        return self.b0 + self.b1 * a0 + self.b2 * a0 * a0

    def eval_quad(self, x: QuadExtScalar) -> QuadExtScalar:
        return quad_poly_eval([self.b0, self.b1, self.b2], x)

    @property
    def disc(self) -> Rat:
        return self.b1 * self.b1 - 4 * self.b0 * self.b2


def quad_poly_eval(coeffs, x: QuadExtScalar) -> QuadExtScalar:
    acc = QuadExtScalar.rational(0, x.radicand)
    for c in reversed(list(coeffs)):
        acc = acc * x + QuadExtScalar.rational(c, x.radicand)
    return acc


@dataclass
class MinimizerReport:
    n: int
    gamma: Rat
    d0: int
    c1_ok: bool
    c2_ok: bool
    c3_ok: bool
    disc: Rat
    a0_selected: Optional[QuadExtScalar]
    p_prime_1: Optional[QuadExtScalar] = None
    p_doubleprime_1: Optional[QuadExtScalar] = None
    pt1_at_1: Optional[QuadExtScalar] = None
    pt2_at_1: Optional[QuadExtScalar] = None
    note: str = ""

    @property
    def all_ok(self) -> bool:
        return self.c1_ok and self.c2_ok and self.c3_ok


@dataclass
class _QuadFamily:
    """Coefficients in a0 (each a list [c0, c1, c2]) of the four scalars
    P'(1), P''(1), Pt1(1), Pt2(1) at fixed (n, gamma, d0)."""

    p_prime: List[Rat]
    p_doubleprime: List[Rat]
    pt1: List[Rat]
    pt2: List[Rat]


def _quad_from_samples(v0, v1, v2, v3, what: str) -> List[Rat]:
    """Exact quadratic through values at a0 = 0, 1, 2, checked at a0 = 3."""
    c0 = v0
    c2 = (v2 - 2 * v1 + v0) / 2
    c1 = v1 - c0 - c2
    if c0 + 3 * c1 + 9 * c2 != v3:
        raise InterpolationInconsistency(
            f"{what} is not quadratic in a0 (degree-2 interpolation failed at a0=3)"
        )
    return [c0, c1, c2]


def _family(n: int, gamma, d0: int) -> _QuadFamily:
    gamma = rat(gamma)
    samples = []
    for a0 in range(4):
        f = f_for_d0(d0, rat(a0))
        P = assemble_P(n, gamma, f, d0).P
        hp = assemble_P_tilde(n, gamma, f, d0)
        dP = P.derive()
        samples.append(
            (
                dP.eval(rat(1)),
                dP.derive().eval(rat(1)),
                hp.p_tilde_1.eval(rat(1)),
                hp.p_tilde_2.eval(rat(1)),
            )
        )
    cols = list(zip(*samples))
    return _QuadFamily(
        _quad_from_samples(*cols[0], "P'(1)"),
        _quad_from_samples(*cols[1], "P''(1)"),
        _quad_from_samples(*cols[2], "Pt1(1)"),
        _quad_from_samples(*cols[3], "Pt2(1)"),
    )


_family_cache: Dict[tuple, _QuadFamily] = {}


def _family_cached(n: int, gamma, d0: int) -> _QuadFamily:
    key = (int(n), rat(gamma), int(d0))
    out = _family_cache.get(key)
    if out is None:
        if len(_family_cache) > 4096:
            _family_cache.clear()
        out = _family(*key)
        _family_cache[key] = out
    return out


def extract_Q(n: int, gamma, d0: int) -> QuadraticQ:
    """Q(a0) = P'(1) as an exact quadratic in the free coefficient a0."""
    fam = _family_cached(n, gamma, d0)
    b0, b1, b2 = fam.p_prime
    return QuadraticQ(b0, b1, b2, int(n), rat(gamma), int(d0))


def disc_Q(n: int, gamma, d0: int) -> Rat:
    return extract_Q(n, gamma, d0).disc


def select_a0(n: int, gamma, d0: int) -> QuadExtScalar:
    """a0~ = (-b1 - sqrt(disc)) / (2 b2), exact in Q(sqrt(disc))."""
    q = extract_Q(n, gamma, d0)
    d = q.disc
    if d < 0:
        raise NoRealCriticalCoefficient(
            f"disc(Q)({n}, {rat_str(q.gamma)}, d0={d0}) = {rat_str(d)} < 0"
        )
    inv = rat(-1) / (2 * q.b2)
    return QuadExtScalar(q.b1 * inv, inv, d)


def default_d0(n: int) -> int:
    """Order of the modulating profile per dimension: 4 below 52, else 1."""
    return 1 if n >= 52 else 4


def check_minimizer(n: int, gamma, d0: Optional[int] = None) -> MinimizerReport:
    """Exact sign certificates for the strict-local-minimizer conditions.

    C1: P'(1) = 0 at a0~ (root by construction; verified exactly);
    C2: P''(1) > 0 at a0~;
    C3: Pt1(1) > 0 and Pt2(1) > 0 at a0~ (sufficient for positive
        definiteness of Pt1*Wt + Pt2*|W|^2*Id since Wt is a Gram matrix).
    """
    gamma = rat(gamma)
    if d0 is None:
        d0 = default_d0(n)
    fam = _family_cached(n, gamma, d0)
    q = extract_Q(n, gamma, d0)
    d = q.disc
    if d < 0:
        return MinimizerReport(
            n, gamma, d0, False, False, False, d, None,
            note="disc(Q) < 0: no real critical coefficient",
        )
    a0 = select_a0(n, gamma, d0)
    p1 = quad_poly_eval(fam.p_prime, a0)
    p2 = quad_poly_eval(fam.p_doubleprime, a0)
    t1 = quad_poly_eval(fam.pt1, a0)
    t2 = quad_poly_eval(fam.pt2, a0)
    return MinimizerReport(
        n,
        gamma,
        d0,
        c1_ok=(p1.sign() == 0),
        c2_ok=(p2.sign() > 0),
        c3_ok=(t1.sign() > 0 and t2.sign() > 0),
        disc=d,
        a0_selected=a0,
        p_prime_1=p1,
        p_doubleprime_1=p2,
        pt1_at_1=t1,
        pt2_at_1=t2,
    )


def find_gamma_star(width, lo=rat(1, 2), hi=rat(99, 100)) -> Tuple[Rat, Rat]:
    """Bracket the sign change of gamma -> disc(Q)(24, gamma, d0=4)."""
    return root_isolate(lambda g: disc_Q(24, g, 4), lo, hi, width)


@dataclass
class SweepCell:
    n: int
    gamma: Rat
    d0: int
    disc_sign: int
    c1: Optional[bool] = None
    c2: Optional[bool] = None
    c3: Optional[bool] = None
    error: str = ""


def sweep_cell(n: int, gamma, d0: int, conditions: bool = True) -> SweepCell:
    gamma = rat(gamma)
    try:
        d = disc_Q(n, gamma, d0)
    except Exception as exc:  # infeasible cell: record the violated precondition
        return SweepCell(n, gamma, d0, 0, error=str(exc))
    cell = SweepCell(n, gamma, d0, sign(d))
    if conditions and d > 0:
        rep = check_minimizer(n, gamma, d0)
        cell.c1, cell.c2, cell.c3 = rep.c1_ok, rep.c2_ok, rep.c3_ok
    return cell


def sweep(
    n_min: int,
    n_max: int,
    gamma_grid_count: int = 99,
    d0_policy: str = "auto",
    d0_fixed: int = 4,
    conditions: bool = True,
    jobs: int = 1,
) -> List[SweepCell]:
    """Dimension/order grid of discriminant signs (n-major, gamma-minor).

    gamma grid: k / (gamma_grid_count + 1) for k = 1 .. gamma_grid_count.
    Cell order is deterministic regardless of the worker count.
    """
    denom = gamma_grid_count + 1
    tasks = []
    for n in range(n_min, n_max + 1):
        d0 = default_d0(n) if d0_policy == "auto" else int(d0_fixed)
        for k in range(1, gamma_grid_count + 1):
            tasks.append((n, rat(k, denom), d0, conditions))
    if jobs > 1:
        import multiprocessing as mp

        with mp.Pool(jobs) as pool:
            cells = pool.starmap(sweep_cell, tasks, chunksize=8)
    else:
        cells = [sweep_cell(*t) for t in tasks]
    return cells


def n_of_gamma(gamma) -> int:
    """Least n0 with disc(Q)(n, gamma, d0=4) > 0 for every n0 <= n <= 51."""
    gamma = rat(gamma)
    if not (0 < gamma < 1):
        raise ValueError("gamma must lie in (0, 1)")
    best = 52
    for n in range(51, 22, -1):
        if disc_Q(n, gamma, 4) > 0:
            best = n
        else:
            break
    return best


def figure1_data(points: int = 199) -> List[Tuple[Rat, Rat]]:
    """(gamma, normalized disc) samples of gamma -> disc(Q)(24, gamma, 4).

    Normalization divides by the maximum |disc| over the grid so the
    curve shape is preserved with values in [-1, 1].
    """
    vals = []
    for k in range(1, points + 1):
        g = rat(k, points + 1)
        vals.append((g, disc_Q(24, g, 4)))
    peak = max(abs(v) for _, v in vals)
    if peak == 0:
        peak = rat(1)
    return [(g, v / peak) for g, v in vals]
