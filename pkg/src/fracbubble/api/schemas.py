"""Pydantic request/response models for the service endpoints.

Exact rationals travel as canonical 'p/q' strings; floats are printed
by the JSON layer with full repr precision.  Every response embeds the
resolved request so reports are self-describing and reproducible.
"""

from __future__ import annotations

from typing import List, Literal, Optional, Tuple

from pydantic import BaseModel, Field


class FIntegralRequest(BaseModel):
    kind: int = Field(ge=1, le=4)
    alpha: int
    beta: int
    n: int
    gamma: str = Field(description="rational gamma as 'p/q'")
    method: Literal["exact", "table", "fourier_fd", "poisson_physical"] = "exact"


class FIntegralResponse(BaseModel):
    kind: int
    alpha: int
    beta: int
    n: int
    gamma: str
    method: str
    coeff: Optional[str] = None
    normalization: str = "sphere*A1*B2"
    value: Optional[float] = None
    error_estimate: Optional[float] = None


class MomentRequest(BaseModel):
    side: Literal["phi", "what"]
    int_part: int
    gamma_mult: int
    derivs: Tuple[int, int] = (0, 0)
    n: int
    gamma: str
    numeric_check: bool = False


class MomentResponse(BaseModel):
    side: str
    int_part: int
    gamma_mult: int
    derivs: Tuple[int, int]
    n: int
    gamma: str
    convergent: bool
    coeff: Optional[str] = None
    base: str = ""
    violated_condition: Optional[str] = None
    numeric_value: Optional[float] = None
    numeric_relative_gap: Optional[float] = None


class BesselCheckRequest(BaseModel):
    pass


class BesselCheck(BaseModel):
    name: str
    value: float
    reference: float
    residual: float
    tolerance: float
    ok: bool


class BesselCheckResponse(BaseModel):
    checks: List[BesselCheck]
    all_ok: bool


class IdentityRequest(BaseModel):
    dim: int = Field(ge=2)
    trials: int = Field(default=1, ge=1, le=100)
    seed: int = 0


class IdentityRow(BaseModel):
    identity: str
    dim: int
    seed: int
    lhs: str
    rhs: str
    equal: bool


class IdentityResponse(BaseModel):
    dim: int
    trials: int
    seed: int
    rows: List[IdentityRow]
    all_equal: bool


class BuildPRequest(BaseModel):
    n: int
    gamma: str
    d0: int = Field(ge=1, le=4)
    f: List[str] = Field(description="coefficients a_0..a_{d0} as 'p/q'")
    include_hessian: bool = False


class BuildPResponse(BaseModel):
    n: int
    gamma: str
    d0: int
    f: List[str]
    P: List[str]
    unit: str
    P_tilde_1: Optional[List[str]] = None
    P_tilde_2: Optional[List[str]] = None


class DiscRequest(BaseModel):
    n: int
    gamma: str
    d0: int = Field(ge=1, le=4)


class DiscResponse(BaseModel):
    n: int
    gamma: str
    d0: int
    b0: str
    b1: str
    b2: str
    disc: str
    disc_sign: int


class GammaStarRequest(BaseModel):
    width: str = "1/10000000"
    lo: str = "1/2"
    hi: str = "99/100"


class GammaStarResponse(BaseModel):
    lo: str
    hi: str
    lo_float: float
    hi_float: float
    width: str


class SweepRequest(BaseModel):
    n_min: int
    n_max: int
    gamma_grid_count: int = 99
    d0_policy: Literal["auto", "fixed"] = "auto"
    d0_fixed: int = 4
    conditions: bool = True
    jobs: int = Field(default=1, ge=1, le=64)


class SweepRow(BaseModel):
    n: int
    gamma: str
    d0: int
    disc_sign: int
    c1: Optional[bool] = None
    c2: Optional[bool] = None
    c3: Optional[bool] = None
    error: str = ""


class SweepResponse(BaseModel):
    rows: List[SweepRow]


class MinimizerRequest(BaseModel):
    n: int
    gamma: str
    d0: Optional[int] = None


class MinimizerResponse(BaseModel):
    n: int
    gamma: str
    d0: int
    c1_ok: bool
    c2_ok: bool
    c3_ok: bool
    all_ok: bool
    disc: str
    a0_selected: Optional[str] = None
    a0_float: Optional[float] = None
    p_doubleprime_1_sign: Optional[int] = None
    pt1_sign: Optional[int] = None
    pt2_sign: Optional[int] = None
    note: str = ""


class Figure1Request(BaseModel):
    points: int = 199


class Figure1Row(BaseModel):
    gamma: float
    disc_normalized: float


class Figure1Response(BaseModel):
    rows: List[Figure1Row]


class ErrataRow(BaseModel):
    source: str
    location: str
    printed: str
    engine: str
    note: str = ""


class ErrataResponse(BaseModel):
    rows: List[ErrataRow]
    count: int
