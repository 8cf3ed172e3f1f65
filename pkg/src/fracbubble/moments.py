"""Exact reduction of 1-D profile moments to the base moments A1 and B2.

A moment is an integral of one of the forms

    phi side:   integral_0^inf  t^eta   phi^(j)(t)  phi^(j')(t)   dt
    what side:  integral_0^inf rho^eta  what^(i)   what^(i')     drho

with eta = int_part + gamma_mult * gamma.  Both profiles satisfy a
Bessel-type ODE  u'' + (a/x) u' - u = 0  with a = 1 - 2*gamma for phi
and a = 1 + 2*gamma for what, which yields three exact rewriting rules:

  * derivative elimination at fixed exponent ((1,1) -> (0,0)),
  * integration by parts for mixed moments ((0,1) -> (0,0), eta -> eta-1),
  * exponent descent by two at fixed derivatives.

Each rule is applied only when its boundary terms provably vanish and
every integral involved converges; the endpoint exponents used are
phi ~ 1, phi' ~ t^(2*gamma-1), what ~ rho^(-2*gamma), what' ~ rho^(-2*gamma-1)
near zero (decay at infinity is exponential).  Violations produce a
divergence result naming the failed inequality, never a silent answer.

Base cases: A1 = phi-moment at eta = 1 - 2*gamma, derivatives (0,0);
B2 = what-moment at eta = (n-3) + 2*gamma, derivatives (0,0).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Tuple

from .exact import Rat, rat, rat_str, ONE

PHI = "phi"
WHAT = "what"


@dataclass(frozen=True)
class MomentKey:
    side: str  # 'phi' | 'what'
    int_part: int
    gamma_mult: int
    derivs: Tuple[int, int]

    def __post_init__(self):
        if self.side not in (PHI, WHAT):
            raise ValueError(f"unknown side {self.side!r}")
        if not all(d in (0, 1) for d in self.derivs):
            raise ValueError("derivative orders must be 0 or 1")


@dataclass
class MomentValue:
    convergent: bool
    coeff: Optional[Rat]  # multiple of A1 (phi side) or B2 (what side)
    violated_condition: Optional[str] = None


class DivergentMomentError(ValueError):
    def __init__(self, message: str):
        super().__init__(message)
        self.condition = message


class ParityError(ValueError):
    """Exponent cannot descend to the base case in integer steps of two."""


class _LinGamma:
    """A value c0 + c1*gamma with exact comparison at rational gamma."""

    __slots__ = ("c0", "c1")

    def __init__(self, c0, c1):
        self.c0 = rat(c0)
        self.c1 = rat(c1)

    def at(self, gamma: Rat) -> Rat:
        return self.c0 + self.c1 * gamma

    def __str__(self):
        return f"{rat_str(self.c0)} + {rat_str(self.c1)}*gamma"


def _eta_str(int_part, gamma_mult) -> str:
    return f"{int_part}{gamma_mult:+d}*gamma"


class MomentReducer:
    """Pointwise-exact moment reduction at fixed integer n and rational gamma.

    Results are cached per instance; instances are cheap, so callers
    typically hold one per (n, gamma) context.
    """

    def __init__(self, n: int, gamma):
        self.n = int(n)
        self.gamma = rat(gamma)
        if not (0 < self.gamma < 1):
            raise ValueError("gamma must lie in (0, 1)")
        self._cache: dict = {}

    # leading exponent of the profile factor near 0
    def _lead(self, side: str, d: int) -> Rat:
        g = self.gamma
        if side == PHI:
            return rat(0) if d == 0 else 2 * g - 1
        return -2 * g if d == 0 else -2 * g - 1

    def _ode_alpha(self, side: str) -> Rat:
        g = self.gamma
        return 1 - 2 * g if side == PHI else 1 + 2 * g

    def _base_int(self, side: str) -> int:
        return 1 if side == PHI else self.n - 3

    def _base_mult(self, side: str) -> int:
        return -2 if side == PHI else 2

    def eta_of(self, key: MomentKey) -> Rat:
        return key.int_part + key.gamma_mult * self.gamma

    def _require(self, ok: bool, text: str) -> None:
        if not ok:
            raise DivergentMomentError(text)

    def _check_convergent(self, key: MomentKey) -> None:
        eta = self.eta_of(key)
        j, jp = key.derivs
        lead = self._lead(key.side, j) + self._lead(key.side, jp)
        # integrand ~ x^(eta + lead) near 0; need exponent > -1
        self._require(
            eta + lead > -1,
            f"divergent at 0: need eta + {rat_str(lead)} > -1 with "
            f"eta = {_eta_str(key.int_part, key.gamma_mult)} = {rat_str(eta)} "
            f"on side {key.side}, derivs {key.derivs}",
        )

    def reduce(self, key: MomentKey) -> MomentValue:
        try:
            coeff = self._reduce_checked(key)
        except DivergentMomentError as exc:
            return MomentValue(False, None, str(exc))
        return MomentValue(True, coeff, None)

    def reduce_coeff(self, key: MomentKey) -> Rat:
        """Like reduce(), but raises DivergentMomentError on divergence."""
        return self._reduce_checked(key)

    def _reduce_checked(self, key: MomentKey) -> Rat:
        if key in self._cache:
            return self._cache[key]
        self._check_convergent(key)
        side = key.side
        eta = self.eta_of(key)
        alpha = self._ode_alpha(side)
        j, jp = key.derivs
        g = self.gamma

        if (j, jp) == (1, 1):
            # int (u')^2 x^eta = ((eta+1)/2) / ((eta+1)/2 - alpha) int u^2 x^eta
            # boundary terms x^(eta+1) (u')^2 and x^(eta+1) u^2 must vanish at 0
            self._require(
                eta + 1 + 2 * self._lead(side, 1) > 0,
                f"derivative-elimination boundary: need eta + 1 + "
                f"{rat_str(2 * self._lead(side, 1))} > 0 at eta = {rat_str(eta)} ({side})",
            )
            self._require(
                eta + 1 + 2 * self._lead(side, 0) > 0,
                f"derivative-elimination boundary: need eta + 1 + "
                f"{rat_str(2 * self._lead(side, 0))} > 0 at eta = {rat_str(eta)} ({side})",
            )
            half = (eta + 1) / 2
            denom = half - alpha
            self._require(denom != 0, f"degenerate elimination at eta = {rat_str(eta)} ({side})")
            factor = half / denom
            base = self._reduce_checked(
                MomentKey(side, key.int_part, key.gamma_mult, (0, 0))
            )
            out = factor * base
        elif (j, jp) in ((0, 1), (1, 0)):
            # int u u' x^eta = -(eta/2) int u^2 x^(eta-1); boundary x^eta u^2 -> 0
            self._require(
                eta + 2 * self._lead(side, 0) > 0,
                f"integration-by-parts boundary: need eta + "
                f"{rat_str(2 * self._lead(side, 0))} > 0 at eta = {rat_str(eta)} ({side})",
            )
            base = self._reduce_checked(
                MomentKey(side, key.int_part - 1, key.gamma_mult, (0, 0))
            )
            out = -(eta / 2) * base
        else:
            out = self._descend_00(key)

        self._cache[key] = out
        return out

    def _descent_factor(self, side: str, eta: Rat) -> Rat:
        """Exact factor c with  int u^2 x^eta = c * int u^2 x^(eta-2).

        Valid when eta > 1 (phi side) or eta > 4*gamma + 1 (what side);
        these inequalities make every boundary term in the derivation
        vanish and every intermediate integral converge.
        """
        g = self.gamma
        alpha = self._ode_alpha(side)
        if side == PHI:
            self._require(
                eta > 1,
                f"exponent-descent validity: need eta > 1 at eta = {rat_str(eta)} (phi)",
            )
        else:
            self._require(
                eta > 4 * g + 1,
                f"exponent-descent validity: need eta > 4*gamma + 1 at eta = {rat_str(eta)} (what)",
            )
        half = (eta + 1) / 2
        denom = half - alpha
        self._require(denom != 0, f"degenerate descent at eta = {rat_str(eta)} ({side})")
        bracket = 1 + half / denom
        self._require(bracket != 0, f"degenerate descent at eta = {rat_str(eta)} ({side})")
        return (eta - alpha) * ((eta - 1) / 2) / bracket

    def _descend_00(self, key: MomentKey) -> Rat:
        side = key.side
        base_int = self._base_int(side)
        base_mult = self._base_mult(side)
        if key.gamma_mult != base_mult:
            raise ParityError(
                f"gamma multiplicity {key.gamma_mult} cannot reach the base "
                f"case multiplicity {base_mult} on side {side}"
            )
        delta = key.int_part - base_int
        if delta % 2 != 0:
            raise ParityError(
                f"exponent {_eta_str(key.int_part, key.gamma_mult)} has the "
                f"wrong parity to reach the base exponent "
                f"{_eta_str(base_int, base_mult)} on side {side}"
            )
        coeff = ONE
        if delta > 0:
            # target above base: chain int x^eta = c(eta) int x^(eta-2) downward
            cur = key.int_part
            while cur > base_int:
                coeff *= self._descent_factor(side, cur + base_mult * self.gamma)
                cur -= 2
        elif delta < 0:
            # target below base: same chain, inverted
            cur = base_int
            while cur > key.int_part:
                f = self._descent_factor(side, cur + base_mult * self.gamma)
                self._require(
                    f != 0, f"descent factor vanished at eta int part {cur} ({side})"
                )
                coeff /= f
                cur -= 2
        return coeff


def reduce_phi_moment(n: int, gamma, key: MomentKey) -> MomentValue:
    """Coefficient of A1 for a phi-side moment (or a divergence report)."""
    if key.side != PHI:
        raise ValueError("key.side must be 'phi'")
    return MomentReducer(n, gamma).reduce(key)


def reduce_what_moment(n: int, gamma, key: MomentKey) -> MomentValue:
    """Coefficient of B2 for a what-side moment (or a divergence report)."""
    if key.side != WHAT:
        raise ValueError("key.side must be 'what'")
    return MomentReducer(n, gamma).reduce(key)


def a_moment_key(alpha: int, derivs=(0, 0)) -> MomentKey:
    """A_alpha-style key: integral t^(alpha - 2*gamma) phi^(j) phi^(j')."""
    return MomentKey(PHI, alpha, -2, tuple(derivs))


def b_moment_key(n: int, alpha: int, derivs=(0, 0)) -> MomentKey:
    """B_alpha-style key: integral rho^(n-1-alpha+2*gamma) what^(i) what^(i')."""
    return MomentKey(WHAT, n - 1 - alpha, 2, tuple(derivs))
