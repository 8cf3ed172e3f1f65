"""Registry of engine-vs-printed-table disagreements.

The engine (validated by two independent numeric oracles and a
brute-force polynomial Laplacian) outvotes printed closed forms; every
disagreement found at the standard sample points is listed here with
both values, never silently adopted.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional

from .energy import bracket_product
from .exact import ExactPoly, rat, rat_str
from .fourier import (
    FIntegralKey,
    f_integral_exact,
    f_integral_table,
    tabulated_keys,
)

SAMPLE_PAIRS = [
    (25, rat(1, 2)),
    (30, rat(1, 4)),
    (52, rat(3, 4)),
    (24, rat(9, 10)),
    (60, rat(1, 2)),
]


@dataclass
class ErratumRow:
    source: str  # which printed formula
    location: str  # evaluation point
    printed: str
    engine: str
    note: str = ""


def f_table_errata() -> List[ErratumRow]:
    """All printed F-value entries that disagree with the engine."""
    rows: List[ErratumRow] = []
    for (kind, alpha, beta) in tabulated_keys():
        key = FIntegralKey(kind, alpha, beta)
        for (n, g) in SAMPLE_PAIRS:
            eng = f_integral_exact(key, n, g)
            tab = f_integral_table(key, n, g)
            if eng != tab:
                rows.append(
                    ErratumRow(
                        source=f"printed F_{kind}({alpha},{beta})",
                        location=f"n={n}, gamma={rat_str(g)}",
                        printed=rat_str(tab),
                        engine=rat_str(eng),
                    )
                )
    return rows


def mismatching_table_keys() -> List[tuple]:
    """Distinct (kind, alpha, beta) with any engine/table disagreement."""
    seen = []
    for (kind, alpha, beta) in tabulated_keys():
        key = FIntegralKey(kind, alpha, beta)
        for (n, g) in SAMPLE_PAIRS:
            if f_integral_exact(key, n, g) != f_integral_table(key, n, g):
                seen.append((kind, alpha, beta))
                break
    return seen


def _block_errata() -> List[ErratumRow]:
    """Printed polynomial-block coefficients that the engine corrects.

    Engine values follow from the channel recursion, which is verified
    end-to-end against a literal polynomial Laplacian; see tests.
    """
    n = ExactPoly([0, 1], "n")
    rows = [
        ErratumRow(
            source="energy block P_32, t^3 coefficient",
            location="symbolic in n",
            printed="16*a0*a1*(n+4)*F1(5,0)/n",
            engine="16*a0*a1*(n+4)*F1(5,0)",
            note="the printed 1/n prefactor belongs to the t^4 term only; "
            "idem for the substituted gradient block P_23",
        ),
        ErratumRow(
            source="Hessian block Pt_2;31, t^2 coefficient",
            location="symbolic in n",
            printed="8*n*F1(3,0)/n = 8*F1(3,0)",
            engine="8*a0*a1*F1(3,0)",
            note="printed term lacks the a0*a1 factor of its siblings",
        ),
        ErratumRow(
            source="Hessian block Pt_2;32, t^3 coefficient",
            location="symbolic in n",
            printed="16*(2n+13)*a1^2*F1(5,0)",
            engine="32*(n+7)*a1^2*F1(5,0)",
            note="engine value restores the trace identity "
            "Psi1_m + n*Psi2_m = Phi_(m+1) that the printed value breaks",
        ),
        ErratumRow(
            source="F_3(5,4) remainder bracket",
            location="symbolic in (n, gamma)",
            printed="(1-2g)[3(6n^3-104n^2+543n-892) + 8g^3(n+4) "
            "- 4g^2(3n^3+7n-44) + 2g(48n^2-83n-116)]",
            engine="printed + (1-2g)*12n^3*(g^2-g)",
            note="difference determined by exact interpolation; vanishes at "
            "gamma = 1/2, which hides it from half-integer spot checks",
        ),
        ErratumRow(
            source="intermediate display for F_1(1,2) in the derivation",
            location="symbolic",
            printed="denominator 12(n-4)(n-2g-4)(n+2g-4)",
            engine="denominator 3(n-4)(n-2g-4)(n+2g-4)",
            note="the final statement and the engine agree; only the "
            "mid-derivation display carries the extra factor 4",
        ),
        ErratumRow(
            source="Hessian gradient-block substitution rule",
            location="structural",
            printed="replace F1(a,b) in Pt_m;0, Pt_m;31, Pt_m;32 by F4(a+2,b)",
            engine="replace in Pt_m;1, Pt_m;31, Pt_m;32 (Pt_m;0 has no F1 "
            "entries; the tangential-kernel block is not substituted)",
            note="resolution fixed by the derivation; mirrors the main "
            "polynomial's substitution pattern",
        ),
    ]
    return rows


def all_errata() -> List[ErratumRow]:
    return f_table_errata() + _block_errata()
