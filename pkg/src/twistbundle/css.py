"""CSS code assembly, parameters, bounded-exact distance, isomorphism checks.

H_X is the binary expansion of d1 and H_Z the binary transpose of the
expansion of d2, so qubits sit on C1 and the orthogonality H_X * H_Z^T = 0 is
exactly d1 * d2 = 0 after expansion. Distance search enumerates weights
1..cap exactly and never reports a capped bound as a certified distance.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from .binlin import (
    BinMatrix,
    SpanSolver,
    blockdiag,
    expand_bientry_matrix,
    gf2_inverse,
    gf2_mul,
    gf2_rank,
    is_monomial,
    kernel_basis,
    transpose,
)
from .errors import OrthogonalityError, ShapeError, ValidationError
from .group_core import Group
from .rchain import (
    RMatrix,
    TotalComplex,
    TwistData,
    build_twisted_complex,
    expand_rmatrix_left,
    is_invertible_twist,
)

__all__ = [
    "CssCode",
    "assemble_css",
    "css_from_matrices",
    "code_parameters",
    "check_weights",
    "DistanceResult",
    "min_distance",
    "FULL_ENUM_MAX_N",
    "IsoReport",
    "verify_chain_iso",
]

# Full-enumeration certification sweeps the kernel span; past this blocklength
# the worst case is out of desk-scale reach.
FULL_ENUM_MAX_N = 28


@dataclass(frozen=True)
class CssCode:
    """A CSS pair with cached ranks; k = n - rank_hx - rank_hz >= 0."""

    hx: BinMatrix
    hz: BinMatrix
    n: int
    rank_hx: int
    rank_hz: int
    k: int
    group: Optional[Group] = None


def css_from_matrices(hx: BinMatrix, hz: BinMatrix, group: Optional[Group] = None) -> CssCode:
    """Build a CssCode from explicit check matrices, verifying orthogonality."""
    if hx.cols != hz.cols:
        raise ShapeError(f"H_X has {hx.cols} columns but H_Z has {hz.cols}")
    prod = gf2_mul(hx, transpose(hz))
    if not prod.is_zero():
        raise OrthogonalityError("H_X * H_Z^T is nonzero")
    rx, rz = gf2_rank(hx), gf2_rank(hz)
    return CssCode(hx, hz, hx.cols, rx, rz, hx.cols - rx - rz, group)


def assemble_css(total: TotalComplex) -> CssCode:
    """Expand d1 into H_X and d2 (transposed) into H_Z, verifying H_X*H_Z^T = 0."""
    hx = expand_bientry_matrix(total.d1, total.group)
    hz = transpose(expand_bientry_matrix(total.d2, total.group))
    prod = gf2_mul(hx, transpose(hz))
    if not prod.is_zero():
        ell = total.group.order
        for r, row in enumerate(prod.data):
            if row:
                c = (row & -row).bit_length() - 1
                rb, cb = r // ell, c // ell
                raise OrthogonalityError(
                    "H_X * H_Z^T is nonzero at "
                    f"C0 block (i={rb // total.q}, v={rb % total.q}) x "
                    f"C2 block (j={cb // total.p}, u={cb % total.p}); "
                    "non-flat twists cannot form a valid CSS code"
                )
    rx, rz = gf2_rank(hx), gf2_rank(hz)
    return CssCode(hx, hz, hx.cols, rx, rz, hx.cols - rx - rz, total.group)


def code_parameters(code: CssCode) -> Tuple[int, int, int, int]:
    """(n, k, rank_hx, rank_hz), all cached at assembly."""
    return code.n, code.k, code.rank_hx, code.rank_hz


def check_weights(code: CssCode) -> Tuple[int, int]:
    """(max row weight of H_X, max row weight of H_Z); a sparsity statistic."""
    wx = max(code.hx.row_weights(), default=0)
    wz = max(code.hz.row_weights(), default=0)
    return wx, wz


@dataclass(frozen=True)
class DistanceResult:
    """Outcome of the distance search on both sides.

    d is None either when the search stayed inconclusive (exact = False;
    the true distance exceeds the corresponding completed weight) or when
    k = 0 and no logical operators exist at all (exact = True). A witness is
    the support tuple of a minimum-weight logical representative.
    """

    d_x: Optional[int]
    d_z: Optional[int]
    exact_x: bool
    exact_z: bool
    weight_cap: int
    completed_x: int
    completed_z: int
    witness_x: Optional[Tuple[int, ...]]
    witness_z: Optional[Tuple[int, ...]]
    full_enum: bool = False


def _verify_witness(columns: Sequence[int], dual: SpanSolver, support: Sequence[int]) -> None:
    syndrome = 0
    vec = 0
    for c in support:
        syndrome ^= columns[c]
        vec |= 1 << c
    if syndrome != 0 or dual.contains(vec):
        raise AssertionError("distance witness failed re-verification")


def _bounded_side(
    h_check: BinMatrix,
    dual_rows: Sequence[int],
    cap: int,
    budget: Optional[int],
) -> Tuple[Optional[int], bool, int, Optional[Tuple[int, ...]]]:
    """Exact search over weights 1..cap; returns (d, exact, completed, witness)."""
    n = h_check.cols
    columns = transpose(h_check).data
    dual = SpanSolver(dual_rows, n)
    spent = 0
    for w in range(1, cap + 1):
        for combo in itertools.combinations(range(n), w):
            if budget is not None:
                spent += 1
                if spent > budget:
                    return None, False, w - 1, None
            syndrome = 0
            for c in combo:
                syndrome ^= columns[c]
            if syndrome != 0:
                continue
            vec = 0
            for c in combo:
                vec |= 1 << c
            if not dual.contains(vec):
                _verify_witness(columns, dual, combo)
                return w, True, w, combo
    return None, False, cap, None


def _full_enum_side(
    h_check: BinMatrix,
    dual_rows: Sequence[int],
) -> Tuple[Optional[int], Optional[Tuple[int, ...]]]:
    """Certified minimum over the whole kernel via a Gray-code span sweep."""
    n = h_check.cols
    basis = kernel_basis(h_check)
    dual = SpanSolver(dual_rows, n)
    best_w: Optional[int] = None
    best_vec: Optional[int] = None
    current = 0
    for step in range(1, 1 << len(basis)):
        current ^= basis[(step & -step).bit_length() - 1]
        w = current.bit_count()
        if best_w is not None and (w, current) >= (best_w, best_vec):
            continue
        if not dual.contains(current):
            best_w, best_vec = w, current
    if best_w is None:
        return None, None
    return best_w, tuple(j for j in range(n) if (best_vec >> j) & 1)


def min_distance(
    code: CssCode,
    weight_cap: int = 6,
    budget: Optional[int] = None,
    full_enum: bool = False,
) -> DistanceResult:
    """Bounded-exact minimum distance for both sides of a CSS code.

    A d found at weight w <= weight_cap is the true distance (exact). With
    full_enum (blocklength at most FULL_ENUM_MAX_N) the whole kernel is swept
    and the result is certified unconditionally. A budget bounds the number
    of weight-w candidates examined per side; exhaustion leaves that side
    unresolved, never wrong.
    """
    if weight_cap < 1:
        raise ValidationError(f"weight_cap must be >= 1, got {weight_cap}")
    if budget is not None and budget < 1:
        raise ValidationError(f"budget must be >= 1, got {budget}")
    if full_enum and code.n > FULL_ENUM_MAX_N:
        raise ValidationError(
            f"full enumeration is limited to n <= {FULL_ENUM_MAX_N}, code has n = {code.n}"
        )
    if code.k == 0:
        return DistanceResult(
            None, None, True, True, weight_cap, weight_cap, weight_cap, None, None, full_enum
        )
    if full_enum:
        d_x, wit_x = _full_enum_side(code.hx, code.hz.data)
        d_z, wit_z = _full_enum_side(code.hz, code.hx.data)
        return DistanceResult(
            d_x, d_z, True, True, weight_cap, code.n, code.n, wit_x, wit_z, True
        )
    d_x, exact_x, done_x, wit_x = _bounded_side(code.hx, code.hz.data, weight_cap, budget)
    d_z, exact_z, done_z, wit_z = _bounded_side(code.hz, code.hx.data, weight_cap, budget)
    return DistanceResult(
        d_x, d_z, exact_x, exact_z, weight_cap, done_x, done_z, wit_x, wit_z, False
    )


@dataclass(frozen=True)
class IsoReport:
    """Chain-isomorphism evidence for per-column twists.

    When every twist component is invertible, T2/T1/T0 are built from inverse
    expansions and both commuting squares are checked on the expanded boundary
    maps. Rank comparisons against the untwisted complex are always included;
    monomial verdicts per expanded phi0 block certify distance preservation,
    and invertible-but-non-monomial twists leave distance equality uncertified.
    """

    applicable: bool
    reason: Optional[str]
    invertible: Tuple[Tuple[str, bool], ...]
    all_invertible: bool
    square_d2: Optional[bool]
    square_d1: Optional[bool]
    n: int
    rank_d1_twisted: int
    rank_d1_untwisted: int
    rank_d2_twisted: int
    rank_d2_untwisted: int
    monomial: Tuple[Tuple[str, bool], ...]

    @property
    def k_twisted(self) -> int:
        return self.n - self.rank_d1_twisted - self.rank_d2_twisted

    @property
    def k_untwisted(self) -> int:
        return self.n - self.rank_d1_untwisted - self.rank_d2_untwisted

    @property
    def squares_commute(self) -> Optional[bool]:
        if self.square_d1 is None or self.square_d2 is None:
            return None
        return self.square_d1 and self.square_d2


def verify_chain_iso(base: RMatrix, fiber: RMatrix, twists: TwistData) -> IsoReport:
    """Check the invertible-twist isomorphism between twisted and untwisted complexes."""
    group = base.group
    ident = TwistData.identity(group, base.cols, fiber.cols, fiber.rows)
    tw_total = build_twisted_complex(base, fiber, twists, allow_nonflat=True)
    un_total = build_twisted_complex(base, fiber, ident)
    d1_tw = expand_bientry_matrix(tw_total.d1, group)
    d2_tw = expand_bientry_matrix(tw_total.d2, group)
    d1_un = expand_bientry_matrix(un_total.d1, group)
    d2_un = expand_bientry_matrix(un_total.d2, group)
    n = d1_tw.cols
    ranks = (gf2_rank(d1_tw), gf2_rank(d1_un), gf2_rank(d2_tw), gf2_rank(d2_un))

    if twists.per_entry is not None:
        return IsoReport(
            False,
            "per-entry twists have no per-column isomorphism data",
            (), False, None, None, n, *ranks, (),
        )

    invertible = []
    monomial = []
    phi1_exp: List[BinMatrix] = []
    phi0_exp: List[BinMatrix] = []
    for j, pair in enumerate(twists.columns):
        e1 = expand_rmatrix_left(pair.phi1)
        e0 = expand_rmatrix_left(pair.phi0)
        phi1_exp.append(e1)
        phi0_exp.append(e0)
        invertible.append((f"phi1[j={j}]", gf2_rank(e1) == e1.rows))
        invertible.append((f"phi0[j={j}]", gf2_rank(e0) == e0.rows))
        monomial.append((f"phi0[j={j}]", is_monomial(e0)))
    all_inv = all(ok for _, ok in invertible)

    square_d2 = square_d1 = None
    if all_inv:
        ell = group.order
        t2 = blockdiag([gf2_inverse(b) for b in phi1_exp])
        t1 = blockdiag(
            [gf2_inverse(b) for b in phi0_exp]
            + [BinMatrix.identity(tw_total.n * tw_total.p * ell)]
        )
        square_d2 = gf2_mul(d2_tw, t2) == gf2_mul(t1, d2_un)
        square_d1 = gf2_mul(d1_tw, t1) == d1_un

    return IsoReport(
        True, None, tuple(invertible), all_inv, square_d2, square_d1,
        n, *ranks, tuple(monomial),
    )
