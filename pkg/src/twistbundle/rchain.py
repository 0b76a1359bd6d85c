"""Matrices over F2[G], twist data, flatness, and total-complex construction.

The twisted total complex of a base pair (R^m -> R^n, boundary dB) and a
fiber pair (R^p -> R^q, boundary dF) has

    C2 = B1 (x) F1   of R-rank m*p,
    C1 = (B1 (x) F0) (+) (B0 (x) F1)   of R-rank m*q + n*p,
    C0 = B0 (x) F0   of R-rank n*q,

with d2 and d1 stored as grids of BiEntry pairs (base part, fiber part). A
BiEntry (b, f) expands to the binary block right_regular(b) * left_regular(f).
Twists phi_j = (phi1_j p x p, phi0_j q x q) are chain-compatible ("flat") when
phi0_j * dF = dF * phi1_j; per-entry twists generalize this per (i, j).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple, Union

from .binlin import (
    BinMatrix,
    blockdiag,
    expand_bientry_matrix,
    gf2_mul,
    gf2_rank,
    transpose,
)
from .errors import (
    FlatnessError,
    GroupMismatchError,
    OrthogonalityError,
    ShapeError,
    ValidationError,
)
from .group_algebra import (
    AlgElem,
    alg_add,
    alg_identity,
    alg_mul,
    alg_zero,
    antipode,
    format_element,
    left_regular,
    parse_element,
)
from .group_core import Group

__all__ = [
    "RMatrix",
    "rmat_from_strings",
    "rmat_identity",
    "rmat_zeros",
    "rmat_scalar",
    "rmat_mul",
    "rmat_transpose",
    "rmat_to_strings",
    "expand_rmatrix_left",
    "TwistPair",
    "TwistData",
    "BiEntry",
    "TotalComplex",
    "FlatnessReport",
    "check_flatness",
    "build_twisted_complex",
    "build_lifted_product",
    "lifted_product_hz",
    "connection_from_group",
    "is_invertible_twist",
]


@dataclass(frozen=True)
class RMatrix:
    """A rectangular matrix with F2[G] entries over a single shared group."""

    group: Group
    rows: int
    cols: int
    entries: Tuple[Tuple[AlgElem, ...], ...]

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0 or len(self.entries) != self.rows:
            raise ShapeError(f"bad RMatrix shape {self.rows}x{self.cols}")
        for row in self.entries:
            if len(row) != self.cols:
                raise ShapeError("ragged RMatrix entry grid")
            for ent in row:
                if ent.group != self.group:
                    raise GroupMismatchError("all RMatrix entries must share one group")

    def entry(self, i: int, j: int) -> AlgElem:
        return self.entries[i][j]

    def __repr__(self) -> str:
        return f"RMatrix({self.rows}x{self.cols} over order-{self.group.order} group)"


def rmat_from_strings(group: Group, grid: Sequence[Sequence[str]]) -> RMatrix:
    """Parse a nested list of element-grammar strings, row-major."""
    rows = len(grid)
    cols = len(grid[0]) if rows else 0
    parsed = tuple(
        tuple(parse_element(group, cell) for cell in row) for row in grid
    )
    return RMatrix(group, rows, cols, parsed)


def rmat_to_strings(m: RMatrix) -> List[List[str]]:
    return [[format_element(ent) for ent in row] for row in m.entries]


def rmat_zeros(group: Group, rows: int, cols: int) -> RMatrix:
    zero = alg_zero(group)
    return RMatrix(group, rows, cols, tuple(tuple(zero for _ in range(cols)) for _ in range(rows)))


def rmat_identity(group: Group, n: int) -> RMatrix:
    return rmat_scalar(group, alg_identity(group), n)


def rmat_scalar(group: Group, elem: AlgElem, n: int) -> RMatrix:
    """elem * I_n."""
    if elem.group != group:
        raise GroupMismatchError("scalar belongs to a different group")
    zero = alg_zero(group)
    return RMatrix(
        group, n, n,
        tuple(tuple(elem if i == j else zero for j in range(n)) for i in range(n)),
    )


def rmat_mul(a: RMatrix, b: RMatrix) -> RMatrix:
    if a.group != b.group:
        raise GroupMismatchError("cannot multiply matrices over different groups")
    if a.cols != b.rows:
        raise ShapeError(f"cannot multiply {a.rows}x{a.cols} by {b.rows}x{b.cols}")
    out = []
    for i in range(a.rows):
        row = []
        for k in range(b.cols):
            acc = alg_zero(a.group)
            for j in range(a.cols):
                acc = alg_add(acc, alg_mul(a.entries[i][j], b.entries[j][k]))
            row.append(acc)
        out.append(tuple(row))
    return RMatrix(a.group, a.rows, b.cols, tuple(out))


def rmat_transpose(a: RMatrix, use_antipode: bool = False) -> RMatrix:
    """Entry-transpose; with use_antipode each entry is also inverted elementwise."""
    out = []
    for j in range(a.cols):
        row = []
        for i in range(a.rows):
            ent = a.entries[i][j]
            row.append(antipode(ent) if use_antipode else ent)
        out.append(tuple(row))
    return RMatrix(a.group, a.cols, a.rows, tuple(out))


def expand_rmatrix_left(a: RMatrix) -> BinMatrix:
    """Binary expansion through the left regular representation entrywise."""
    ell = a.group.order
    data = [0] * (a.rows * ell)
    for i, row in enumerate(a.entries):
        for j, ent in enumerate(row):
            if ent.support == 0:
                continue
            block = left_regular(ent)
            for r in range(ell):
                data[i * ell + r] ^= block.data[r] << (j * ell)
    return BinMatrix(a.rows * ell, a.cols * ell, data)


@dataclass(frozen=True)
class TwistPair:
    """One chain endomorphism: phi1 acts on F1 (p x p), phi0 on F0 (q x q)."""

    phi1: RMatrix
    phi0: RMatrix

    def __post_init__(self):
        if self.phi1.rows != self.phi1.cols:
            raise ShapeError(f"phi1 must be square, got {self.phi1.rows}x{self.phi1.cols}")
        if self.phi0.rows != self.phi0.cols:
            raise ShapeError(f"phi0 must be square, got {self.phi0.rows}x{self.phi0.cols}")
        if self.phi1.group != self.phi0.group:
            raise GroupMismatchError("twist pair components over different groups")


@dataclass(frozen=True)
class TwistData:
    """Twists for the m base generators.

    Either one TwistPair per generator column j, or a fully populated
    per-entry table indexed [j][i] (generator column j, base row i). When
    per_entry is present the per-column view is unavailable.
    """

    columns: Optional[Tuple[TwistPair, ...]] = None
    per_entry: Optional[Tuple[Tuple[TwistPair, ...], ...]] = None

    def __post_init__(self):
        if (self.columns is None) == (self.per_entry is None):
            raise ValidationError("TwistData needs exactly one of columns or per_entry")
        pairs = self._all_pairs()
        if not pairs:
            raise ValidationError("TwistData must cover at least one generator")
        p, q, group = pairs[0].phi1.rows, pairs[0].phi0.rows, pairs[0].phi1.group
        for pair in pairs:
            if pair.phi1.rows != p or pair.phi0.rows != q:
                raise ShapeError("twist pairs disagree on fiber dimensions")
            if pair.phi1.group != group:
                raise GroupMismatchError("twist pairs over different groups")
        if self.per_entry is not None:
            n = len(self.per_entry[0])
            if n == 0 or any(len(col) != n for col in self.per_entry):
                raise ShapeError("per-entry twist table must be rectangular and nonempty")

    def _all_pairs(self) -> List[TwistPair]:
        if self.columns is not None:
            return list(self.columns)
        return [pair for col in self.per_entry for pair in col]

    @classmethod
    def from_columns(cls, pairs: Sequence[TwistPair]) -> "TwistData":
        return cls(columns=tuple(pairs))

    @classmethod
    def from_per_entry(cls, table: Sequence[Sequence[TwistPair]]) -> "TwistData":
        return cls(per_entry=tuple(tuple(col) for col in table))

    @classmethod
    def identity(cls, group: Group, m: int, p: int, q: int) -> "TwistData":
        pair = TwistPair(rmat_identity(group, p), rmat_identity(group, q))
        return cls(columns=tuple(pair for _ in range(m)))

    @property
    def m(self) -> int:
        return len(self.columns) if self.columns is not None else len(self.per_entry)

    @property
    def p(self) -> int:
        return self._all_pairs()[0].phi1.rows

    @property
    def q(self) -> int:
        return self._all_pairs()[0].phi0.rows

    @property
    def group(self) -> Group:
        return self._all_pairs()[0].phi1.group

    @property
    def n_rows(self) -> Optional[int]:
        return len(self.per_entry[0]) if self.per_entry is not None else None

    def pair_at(self, i: int, j: int) -> TwistPair:
        """The twist used at base entry (row i, generator column j)."""
        if self.per_entry is not None:
            return self.per_entry[j][i]
        return self.columns[j]

    def is_identity(self) -> bool:
        ident1 = rmat_identity(self.group, self.p)
        ident0 = rmat_identity(self.group, self.q)
        return all(pair.phi1 == ident1 and pair.phi0 == ident0 for pair in self._all_pairs())

    def labels(self) -> List[str]:
        """One label per checked twist, aligned with check_flatness reports."""
        if self.columns is not None:
            return [f"j={j}" for j in range(self.m)]
        n = self.n_rows
        return [f"j={j},i={i}" for j in range(self.m) for i in range(n)]

    def labeled_pairs(self) -> List[Tuple[str, TwistPair]]:
        if self.columns is not None:
            return list(zip(self.labels(), self.columns))
        n = self.n_rows
        return [
            (f"j={j},i={i}", self.per_entry[j][i])
            for j in range(self.m)
            for i in range(n)
        ]


@dataclass(frozen=True)
class BiEntry:
    """A pre-expansion entry: base coefficient paired with fiber coefficient.

    A pair with either part zero expands to the zero block, so such pairs are
    normalized to (0, 0) on construction to keep grid equality canonical.
    """

    base_part: AlgElem
    fiber_part: AlgElem

    def __post_init__(self):
        if self.base_part.group != self.fiber_part.group:
            raise GroupMismatchError("bientry parts over different groups")
        if self.base_part.support == 0 or self.fiber_part.support == 0:
            zero = alg_zero(self.base_part.group)
            object.__setattr__(self, "base_part", zero)
            object.__setattr__(self, "fiber_part", zero)

    def is_zero(self) -> bool:
        return self.base_part.support == 0


def _bientry(base: AlgElem, fiber: AlgElem) -> BiEntry:
    if base.support == 0 or fiber.support == 0:
        zero = alg_zero(base.group)
        return BiEntry(zero, zero)
    return BiEntry(base, fiber)


@dataclass(frozen=True)
class TotalComplex:
    """The 3-term twisted complex as two BiEntry grids.

    d2 has shape (m*q + n*p) x (m*p) and d1 has shape (n*q) x (m*q + n*p),
    with row/column order lexicographic in (base index, fiber index) and the
    C1 block order B1(x)F0 first, then B0(x)F1.
    """

    group: Group
    m: int
    n: int
    p: int
    q: int
    d2: Tuple[Tuple[BiEntry, ...], ...]
    d1: Tuple[Tuple[BiEntry, ...], ...]

    def idx_c2(self, j: int, u: int) -> int:
        return j * self.p + u

    def idx_c1_left(self, j: int, v: int) -> int:
        return j * self.q + v

    def idx_c1_right(self, i: int, u: int) -> int:
        return self.m * self.q + i * self.p + u

    def idx_c0(self, i: int, v: int) -> int:
        return i * self.q + v

    @property
    def rank_c1(self) -> int:
        return self.m * self.q + self.n * self.p


@dataclass(frozen=True)
class FlatnessReport:
    """Per-twist chain-compatibility verdicts; flat is their conjunction."""

    flat: bool
    per_twist: Tuple[Tuple[str, bool], ...]

    def as_dict(self) -> dict:
        return {label: ok for label, ok in self.per_twist}


def check_flatness(fiber_dF: RMatrix, twists: TwistData) -> FlatnessReport:
    """Report, per generator (or per entry), whether phi0 * dF = dF * phi1."""
    if twists.group != fiber_dF.group:
        raise GroupMismatchError("twists and fiber are over different groups")
    if twists.p != fiber_dF.cols or twists.q != fiber_dF.rows:
        raise ShapeError(
            f"twists sized for a {twists.q}x{twists.p} fiber boundary, "
            f"got {fiber_dF.rows}x{fiber_dF.cols}"
        )
    verdicts = []
    for label, pair in twists.labeled_pairs():
        ok = rmat_mul(pair.phi0, fiber_dF) == rmat_mul(fiber_dF, pair.phi1)
        verdicts.append((label, ok))
    return FlatnessReport(all(ok for _, ok in verdicts), tuple(verdicts))


def _check_build_inputs(base_dB: RMatrix, fiber_dF: RMatrix, twists: TwistData) -> None:
    if base_dB.group != fiber_dF.group or twists.group != base_dB.group:
        raise GroupMismatchError("base, fiber, and twists must share one group")
    if twists.m != base_dB.cols:
        raise ShapeError(
            f"twists cover {twists.m} generators but the base has {base_dB.cols} columns"
        )
    if twists.per_entry is not None and twists.n_rows != base_dB.rows:
        raise ShapeError(
            f"per-entry twist table covers {twists.n_rows} base rows, "
            f"base has {base_dB.rows}"
        )
    if twists.p != fiber_dF.cols or twists.q != fiber_dF.rows:
        raise ShapeError(
            f"twists sized for a {twists.q}x{twists.p} fiber boundary, "
            f"got {fiber_dF.rows}x{fiber_dF.cols}"
        )


def build_twisted_complex(
    base_dB: RMatrix,
    fiber_dF: RMatrix,
    twists: TwistData,
    allow_nonflat: bool = False,
) -> TotalComplex:
    """Assemble d2 and d1 of the twisted total complex.

    Refuses non-flat twists unless allow_nonflat is set; an override exists
    only for experimentation, and the CSS orthogonality check downstream is
    fatal either way.
    """
    _check_build_inputs(base_dB, fiber_dF, twists)
    report = check_flatness(fiber_dF, twists)
    if not report.flat and not allow_nonflat:
        failing = ", ".join(label for label, ok in report.per_twist if not ok)
        raise FlatnessError(
            f"twists are not chain-compatible with the fiber boundary at: {failing}"
        )
    group = base_dB.group
    m, n = base_dB.cols, base_dB.rows
    p, q = fiber_dF.cols, fiber_dF.rows
    one = alg_identity(group)
    zero = alg_zero(group)
    zero_entry = BiEntry(zero, zero)

    d2: List[List[BiEntry]] = [[zero_entry] * (m * p) for _ in range(m * q + n * p)]
    for j in range(m):
        for v in range(q):
            for u in range(p):
                d2[j * q + v][j * p + u] = _bientry(one, fiber_dF.entries[v][u])
    for i in range(n):
        for j in range(m):
            phi1 = twists.pair_at(i, j).phi1
            b = base_dB.entries[i][j]
            for up in range(p):
                for u in range(p):
                    d2[m * q + i * p + up][j * p + u] = _bientry(b, phi1.entries[up][u])

    d1: List[List[BiEntry]] = [[zero_entry] * (m * q + n * p) for _ in range(n * q)]
    for i in range(n):
        for j in range(m):
            phi0 = twists.pair_at(i, j).phi0
            b = base_dB.entries[i][j]
            for vp in range(q):
                for v in range(q):
                    d1[i * q + vp][j * q + v] = _bientry(b, phi0.entries[vp][v])
        for vp in range(q):
            for u in range(p):
                d1[i * q + vp][m * q + i * p + u] = _bientry(one, fiber_dF.entries[vp][u])

    return TotalComplex(
        group, m, n, p, q,
        tuple(tuple(row) for row in d2),
        tuple(tuple(row) for row in d1),
    )


def _first_nonzero_block(prod: BinMatrix, ell: int, q: int, p: int) -> str:
    for r, row in enumerate(prod.data):
        if row:
            c = (row & -row).bit_length() - 1
            rb, cb = r // ell, c // ell
            return f"C0 block (i={rb // q}, v={rb % q}) x C2 block (j={cb // p}, u={cb % p})"
    return "nowhere"


def lifted_product_hz(a: RMatrix, b: RMatrix, transpose_mode: str = "plain") -> BinMatrix:
    """The literal Z-check matrix [I (x) B^T | A^T (x) I] in binary-expanded form.

    transpose_mode "plain" keeps transposed entries verbatim; "antipode" maps
    each through the antipode, which matches the transpose of the expanded d2.
    """
    if transpose_mode not in ("plain", "antipode"):
        raise ValidationError(f"transpose_mode must be plain or antipode, got {transpose_mode!r}")
    if a.group != b.group:
        raise GroupMismatchError("factors over different groups")
    use_antipode = transpose_mode == "antipode"
    group = a.group
    m, n = a.cols, a.rows
    p, q = b.cols, b.rows
    one = alg_identity(group)
    zero = alg_zero(group)
    zero_entry = BiEntry(zero, zero)

    grid: List[List[BiEntry]] = [[zero_entry] * (m * q + n * p) for _ in range(m * p)]
    for j in range(m):
        for u in range(p):
            for v in range(q):
                ent = b.entries[v][u]
                if use_antipode:
                    ent = antipode(ent)
                grid[j * p + u][j * q + v] = _bientry(one, ent)
    for i in range(n):
        for j in range(m):
            ent = a.entries[i][j]
            if use_antipode:
                ent = antipode(ent)
            for u in range(p):
                grid[j * p + u][m * q + i * p + u] = _bientry(ent, one)
    return expand_bientry_matrix(grid, group)


def build_lifted_product(a: RMatrix, b: RMatrix, transpose_mode: str = "plain") -> TotalComplex:
    """The untwisted product of two one-step complexes (identity twists).

    Also materializes the literal Z-check matrix under the chosen transpose
    mode and verifies orthogonality of the expanded pair; a violation is
    fatal and names the offending block.
    """
    total = build_twisted_complex(
        a, b, TwistData.identity(a.group, a.cols, b.cols, b.rows)
    )
    hz = lifted_product_hz(a, b, transpose_mode)
    hx = expand_bientry_matrix(total.d1, a.group)
    prod = gf2_mul(hx, transpose(hz))
    if not prod.is_zero():
        where = _first_nonzero_block(prod, a.group.order, total.q, total.p)
        raise OrthogonalityError(
            f"literal {transpose_mode}-transpose Z checks violate H_X*H_Z^T = 0 at {where}"
        )
    return total


def connection_from_group(
    base_dB: RMatrix,
    fiber_dF: RMatrix,
    assignment: Sequence[Sequence[Union[str, AlgElem, None]]],
    rho: str = "left",
) -> TwistData:
    """Per-entry scalar twists g_ij * I from a grid of group elements.

    assignment is an n x m grid aligned with the base matrix; each cell is a
    single group element (name string or singleton AlgElem), or None where
    the base entry is zero. Assignments at zero base entries are ignored and
    replaced by the identity. The resulting twists are checked for flatness:
    a scalar g is chain-compatible exactly when g * f = f * g for every fiber
    entry f, which is automatic for commutative groups but a real constraint
    otherwise.
    """
    if rho != "left":
        raise ValidationError(f"only left-multiplication connections are supported, got {rho!r}")
    if base_dB.group != fiber_dF.group:
        raise GroupMismatchError("base and fiber over different groups")
    group = base_dB.group
    n, m = base_dB.rows, base_dB.cols
    p, q = fiber_dF.cols, fiber_dF.rows
    if len(assignment) != n or any(len(row) != m for row in assignment):
        raise ValidationError(f"connection grid must be {n}x{m} to match the base matrix")

    def resolve(i: int, j: int) -> AlgElem:
        cell = assignment[i][j]
        if isinstance(cell, str):
            cell = parse_element(group, cell) if cell.strip() else None
        base_zero = base_dB.entries[i][j].support == 0
        if cell is None:
            if base_zero:
                return alg_identity(group)
            raise ValidationError(
                f"missing connection assignment at (i={i}, j={j}) where the base entry is nonzero"
            )
        if cell.group != group:
            raise GroupMismatchError(f"assignment at (i={i}, j={j}) is over a different group")
        if cell.support.bit_count() != 1:
            raise ValidationError(
                f"assignment at (i={i}, j={j}) must be a single group element, "
                f"got {format_element(cell)!r}"
            )
        return alg_identity(group) if base_zero else cell

    table = []
    for j in range(m):
        col = []
        for i in range(n):
            g = resolve(i, j)
            col.append(TwistPair(rmat_scalar(group, g, p), rmat_scalar(group, g, q)))
        table.append(tuple(col))
    twists = TwistData.from_per_entry(table)

    report = check_flatness(fiber_dF, twists)
    if not report.flat:
        failing = ", ".join(label for label, ok in report.per_twist if not ok)
        raise FlatnessError(
            "scalar connection is not chain-compatible at: "
            f"{failing}; each assigned element must commute with every fiber entry"
        )
    return twists


def is_invertible_twist(phi: RMatrix) -> bool:
    """True iff the full left-regular binary expansion of phi has full rank."""
    if phi.rows != phi.cols:
        raise ShapeError(f"twist must be square, got {phi.rows}x{phi.cols}")
    expanded = expand_rmatrix_left(phi)
    return gf2_rank(expanded) == expanded.rows
