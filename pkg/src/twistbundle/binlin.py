"""Dense GF(2) linear algebra on bit-packed rows.

A BinMatrix row is a Python integer whose bit j is the entry in column j.
All operations are pure: inputs are never mutated, and echelon caches live in
solver objects so repeated membership queries stay cheap.
"""

from __future__ import annotations

from typing import Iterable, Iterator, List, Optional, Sequence, Tuple

from .errors import GroupMismatchError, ShapeError, SingularMatrixError, ValidationError

__all__ = [
    "BinMatrix",
    "iter_bits",
    "gf2_mul",
    "gf2_rank",
    "gf2_inverse",
    "kernel_basis",
    "SpanSolver",
    "solve_in_image",
    "is_monomial",
    "transpose",
    "blockdiag",
    "expand_bientry_matrix",
    "matrix_to_text",
    "matrix_from_text",
]


def iter_bits(x: int) -> Iterator[int]:
    """Yield the set-bit positions of x in increasing order."""
    while x:
        low = x & -x
        yield low.bit_length() - 1
        x ^= low


class BinMatrix:
    """An immutable rows x cols matrix over GF(2)."""

    __slots__ = ("rows", "cols", "data")

    def __init__(self, rows: int, cols: int, data: Sequence[int]):
        if rows < 0 or cols < 0:
            raise ShapeError(f"negative dimensions {rows}x{cols}")
        if len(data) != rows:
            raise ShapeError(f"got {len(data)} rows for a {rows}x{cols} matrix")
        mask = (1 << cols) - 1
        for i, row in enumerate(data):
            if row < 0 or row & ~mask:
                raise ShapeError(f"row {i} has bits outside columns 0..{cols - 1}")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "data", tuple(data))

    def __setattr__(self, name: str, value: object) -> None:
        raise AttributeError("BinMatrix is immutable")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BinMatrix):
            return NotImplemented
        return (self.rows, self.cols, self.data) == (other.rows, other.cols, other.data)

    def __hash__(self) -> int:
        return hash((self.rows, self.cols, self.data))

    def __repr__(self) -> str:
        return f"BinMatrix({self.rows}x{self.cols})"

    def get(self, i: int, j: int) -> int:
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise ShapeError(f"index ({i}, {j}) outside {self.rows}x{self.cols}")
        return (self.data[i] >> j) & 1

    def row_weights(self) -> List[int]:
        return [row.bit_count() for row in self.data]

    def is_zero(self) -> bool:
        return all(row == 0 for row in self.data)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "BinMatrix":
        return cls(rows, cols, [0] * rows)

    @classmethod
    def identity(cls, n: int) -> "BinMatrix":
        return cls(n, n, [1 << i for i in range(n)])

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: Optional[int] = None) -> "BinMatrix":
        if cols is None:
            cols = len(rows[0]) if rows else 0
        data = []
        for row in rows:
            if len(row) != cols:
                raise ShapeError("ragged row list")
            data.append(sum((v & 1) << j for j, v in enumerate(row)))
        return cls(len(rows), cols, data)


def transpose(m: BinMatrix) -> BinMatrix:
    out = [0] * m.cols
    for i, row in enumerate(m.data):
        for j in iter_bits(row):
            out[j] |= 1 << i
    return BinMatrix(m.cols, m.rows, out)


def gf2_mul(a: BinMatrix, b: BinMatrix) -> BinMatrix:
    if a.cols != b.rows:
        raise ShapeError(f"cannot multiply {a.rows}x{a.cols} by {b.rows}x{b.cols}")
    data = []
    for row in a.data:
        acc = 0
        for j in iter_bits(row):
            acc ^= b.data[j]
        data.append(acc)
    return BinMatrix(a.rows, b.cols, data)


def _reduced_echelon(rows: Iterable[int]) -> Tuple[List[int], List[int]]:
    """Reduced row-echelon form: (pivot columns, rows), pivots increasing."""
    pivots: List[int] = []
    basis: List[int] = []
    for row in rows:
        for p, r in zip(pivots, basis):
            if (row >> p) & 1:
                row ^= r
        if row == 0:
            continue
        p = (row & -row).bit_length() - 1
        for i, r in enumerate(basis):
            if (r >> p) & 1:
                basis[i] = r ^ row
        pos = sum(1 for q in pivots if q < p)
        pivots.insert(pos, p)
        basis.insert(pos, row)
    return pivots, basis


def gf2_rank(m: BinMatrix) -> int:
    pivots, _ = _reduced_echelon(m.data)
    return len(pivots)


def kernel_basis(m: BinMatrix) -> List[int]:
    """A basis of {v : m*v = 0}, one bit-packed vector of length m.cols per free column."""
    pivots, basis = _reduced_echelon(m.data)
    pivot_set = set(pivots)
    out = []
    for f in range(m.cols):
        if f in pivot_set:
            continue
        v = 1 << f
        for p, r in zip(pivots, basis):
            if (r >> f) & 1:
                v |= 1 << p
        out.append(v)
    return out


class SpanSolver:
    """Cached membership oracle for the GF(2) span of fixed generator vectors."""

    __slots__ = ("length", "_pivots", "_basis")

    def __init__(self, vectors: Iterable[int], length: int):
        if length < 0:
            raise ShapeError("negative vector length")
        vecs = list(vectors)
        mask = (1 << length) - 1
        for v in vecs:
            if v < 0 or v & ~mask:
                raise ShapeError(f"generator has bits outside length {length}")
        self.length = length
        self._pivots, self._basis = _reduced_echelon(vecs)

    @property
    def rank(self) -> int:
        return len(self._pivots)

    def contains(self, v: int) -> bool:
        if v < 0 or v >> self.length:
            raise ShapeError(f"vector has bits outside length {self.length}")
        for p, r in zip(self._pivots, self._basis):
            if (v >> p) & 1:
                v ^= r
        return v == 0


def solve_in_image(m: BinMatrix, v: int) -> bool:
    """True iff m*x = v is solvable, i.e. v lies in the column space of m."""
    return SpanSolver(transpose(m).data, m.rows).contains(v)


def is_monomial(m: BinMatrix) -> bool:
    """True iff m is square with exactly one 1 per row and per column."""
    if m.rows != m.cols:
        return False
    seen = 0
    for row in m.data:
        if row.bit_count() != 1:
            return False
        if seen & row:
            return False
        seen |= row
    return m.rows == 0 or seen == (1 << m.cols) - 1


def gf2_inverse(m: BinMatrix) -> BinMatrix:
    if m.rows != m.cols:
        raise ShapeError(f"inverse needs a square matrix, got {m.rows}x{m.cols}")
    n = m.rows
    aug = [row | (1 << (n + i)) for i, row in enumerate(m.data)]
    pivots: List[int] = []
    basis: List[int] = []
    for row in aug:
        for p, r in zip(pivots, basis):
            if (row >> p) & 1:
                row ^= r
        low = row & ((1 << n) - 1)
        if low == 0:
            raise SingularMatrixError("matrix is singular over GF(2)")
        p = (low & -low).bit_length() - 1
        for i, r in enumerate(basis):
            if (r >> p) & 1:
                basis[i] = r ^ row
        pos = sum(1 for q in pivots if q < p)
        pivots.insert(pos, p)
        basis.insert(pos, row)
    inv = [0] * n
    for p, r in zip(pivots, basis):
        inv[p] = r >> n
    return BinMatrix(n, n, inv)


def blockdiag(blocks: Sequence[BinMatrix]) -> BinMatrix:
    rows = sum(b.rows for b in blocks)
    cols = sum(b.cols for b in blocks)
    data = [0] * rows
    roff = coff = 0
    for b in blocks:
        for i, row in enumerate(b.data):
            data[roff + i] = row << coff
        roff += b.rows
        coff += b.cols
    return BinMatrix(rows, cols, data)


def expand_bientry_matrix(entries: Sequence[Sequence[object]], group) -> BinMatrix:
    """Expand a grid of BiEntry values into its binary matrix.

    Each entry (b, f) becomes the order x order block
    right_regular(b) * left_regular(f); zero entries become zero blocks.
    """
    from .group_algebra import left_regular, right_regular

    ell = group.order
    brows = len(entries)
    bcols = len(entries[0]) if brows else 0
    data = [0] * (brows * ell)
    cache: dict = {}
    for bi, row in enumerate(entries):
        if len(row) != bcols:
            raise ShapeError("ragged BiEntry grid")
        for bj, ent in enumerate(row):
            b, f = ent.base_part, ent.fiber_part
            if b.group != group or f.group != group:
                raise GroupMismatchError("BiEntry parts must share the expansion group")
            if b.support == 0 or f.support == 0:
                continue
            key = (b.support, f.support)
            block = cache.get(key)
            if block is None:
                block = gf2_mul(right_regular(b), left_regular(f))
                cache[key] = block
            shift = bj * ell
            base = bi * ell
            for r in range(ell):
                data[base + r] ^= block.data[r] << shift
    return BinMatrix(brows * ell, bcols * ell, data)


def matrix_to_text(m: BinMatrix) -> str:
    """Dense text form: a "rows cols" header then one '0'/'1' line per row.

    The leftmost character of each line is column 0.
    """
    lines = [f"{m.rows} {m.cols}"]
    for row in m.data:
        lines.append("".join("1" if (row >> j) & 1 else "0" for j in range(m.cols)))
    return "\n".join(lines) + "\n"


def matrix_from_text(text: str) -> BinMatrix:
    lines = text.splitlines()
    if not lines:
        raise ValidationError("empty matrix text")
    head = lines[0].split()
    if len(head) != 2 or not all(tok.isdigit() for tok in head):
        raise ValidationError(f"bad matrix header {lines[0]!r}: expected 'rows cols'")
    rows, cols = int(head[0]), int(head[1])
    body = [ln for ln in lines[1:] if ln.strip()]
    if len(body) != rows:
        raise ValidationError(f"expected {rows} data lines, got {len(body)}")
    data = []
    for i, ln in enumerate(body):
        ln = ln.strip()
        if len(ln) != cols or set(ln) - {"0", "1"}:
            raise ValidationError(f"line {i + 2} is not {cols} characters of 0/1")
        data.append(sum(1 << j for j, ch in enumerate(ln) if ch == "1"))
    return BinMatrix(rows, cols, data)
