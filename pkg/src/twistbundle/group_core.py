"""Finite groups represented concretely by multiplication tables.

Element index 0 is always the identity and is always named "e". A Group is
immutable after construction and every constructor runs the full validation
(identity law, Latin-square cancellation, exhaustive associativity, inverses).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np

from .errors import (
    AssociativityError,
    GroupValidationError,
    IdentityLawError,
    InverseError,
    LatinSquareError,
)

__all__ = ["MAX_ORDER", "Group", "build_cyclic", "build_dihedral", "build_from_table"]

# Associativity validation is O(order^3); 512 keeps it under a second.
MAX_ORDER = 512

_NAME_RE = re.compile(r"^[A-Za-z][A-Za-z0-9_^]*$")


@dataclass(frozen=True)
class Group:
    """Element names plus a validated multiplication table over indices."""

    element_names: Tuple[str, ...]
    mul_table: Tuple[Tuple[int, ...], ...]
    inv_table: Tuple[int, ...]

    @property
    def order(self) -> int:
        return len(self.element_names)

    def mul(self, a: int, b: int) -> int:
        return self.mul_table[a][b]

    def inv(self, a: int) -> int:
        return self.inv_table[a]

    def index_of(self, name: str) -> int:
        try:
            return self.element_names.index(name)
        except ValueError:
            raise GroupValidationError(f"no element named {name!r}") from None

    def export(self) -> Tuple[List[str], List[List[int]]]:
        """Plain (names, table) lists; build_from_table(*export()) round-trips."""
        return list(self.element_names), [list(row) for row in self.mul_table]

    def __repr__(self) -> str:
        return f"Group(order={self.order}, elements={list(self.element_names)!r})"


def _validate_names(names: Sequence[str]) -> Tuple[str, ...]:
    if len(names) == 0:
        raise GroupValidationError("a group needs at least one element")
    if len(names) > MAX_ORDER:
        raise GroupValidationError(f"group order {len(names)} exceeds cap {MAX_ORDER}")
    if len(set(names)) != len(names):
        raise GroupValidationError("element names must be distinct")
    for nm in names:
        if not _NAME_RE.match(nm):
            raise GroupValidationError(
                f"invalid element name {nm!r}: names must match {_NAME_RE.pattern}"
            )
    if names[0] != "e":
        raise IdentityLawError("the element at index 0 must be the identity, named 'e'")
    return tuple(names)


def _validate_table(order: int, mul_table: Sequence[Sequence[int]]) -> Tuple[Tuple[int, ...], ...]:
    if len(mul_table) != order:
        raise GroupValidationError(f"table has {len(mul_table)} rows for order {order}")
    rows: List[Tuple[int, ...]] = []
    for a, row in enumerate(mul_table):
        if len(row) != order:
            raise GroupValidationError(f"table row {a} has {len(row)} entries for order {order}")
        for b, v in enumerate(row):
            if not isinstance(v, int) or isinstance(v, bool) or not 0 <= v < order:
                raise GroupValidationError(f"table entry [{a}][{b}] = {v!r} is not an index")
        rows.append(tuple(row))
    table = tuple(rows)

    for b in range(order):
        if table[0][b] != b:
            raise IdentityLawError(f"e*g_{b} = g_{table[0][b]}: index 0 is not a left identity")
    for a in range(order):
        if table[a][0] != a:
            raise IdentityLawError(f"g_{a}*e = g_{table[a][0]}: index 0 is not a right identity")

    full = frozenset(range(order))
    for a in range(order):
        if frozenset(table[a]) != full:
            raise LatinSquareError(f"row {a} is not a permutation of 0..{order - 1}")
    for b in range(order):
        if frozenset(table[a][b] for a in range(order)) != full:
            raise LatinSquareError(f"column {b} is not a permutation of 0..{order - 1}")

    # (a*b)*c vs a*(b*c), vectorized over (b, c) for each a.
    t = np.asarray(table, dtype=np.intp)
    for a in range(order):
        lhs = t[t[a]]
        rhs = t[a][t]
        if not np.array_equal(lhs, rhs):
            b, c = map(int, np.argwhere(lhs != rhs)[0])
            raise AssociativityError(
                f"not associative: (g_{a}*g_{b})*g_{c} = g_{int(lhs[b, c])}"
                f" but g_{a}*(g_{b}*g_{c}) = g_{int(rhs[b, c])}"
            )
    return table


def _inverses(order: int, table: Tuple[Tuple[int, ...], ...]) -> Tuple[int, ...]:
    inv: List[int] = []
    for a in range(order):
        b = table[a].index(0)
        if table[b][a] != 0:
            raise InverseError(f"g_{a} has a right inverse g_{b} that is not a left inverse")
        inv.append(b)
    return tuple(inv)


def build_from_table(element_names: Sequence[str], mul_table: Sequence[Sequence[int]]) -> Group:
    """Validate an explicit (names, table) pair into a Group."""
    names = _validate_names(element_names)
    table = _validate_table(len(names), mul_table)
    return Group(names, table, _inverses(len(names), table))


def build_cyclic(order: int) -> Group:
    """The cyclic group Z_order with elements e, g, g^2, ..."""
    if not isinstance(order, int) or isinstance(order, bool) or order < 1:
        raise GroupValidationError(f"cyclic order must be a positive integer, got {order!r}")
    if order > MAX_ORDER:
        raise GroupValidationError(f"group order {order} exceeds cap {MAX_ORDER}")
    names = ["e"] + ["g" if a == 1 else f"g^{a}" for a in range(1, order)]
    table = [[(a + b) % order for b in range(order)] for a in range(order)]
    return build_from_table(names, table)


def build_dihedral(n: int) -> Group:
    """The dihedral group D_n of order 2n, ordered e, r, ..., r^{n-1}, s, rs, ...

    Index a + n*b encodes r^a s^b; products apply left to right ("rs" = r*s),
    so s*r = r^{n-1}*s.
    """
    if not isinstance(n, int) or isinstance(n, bool) or n < 2:
        raise GroupValidationError(f"dihedral parameter must be an integer >= 2, got {n!r}")
    if 2 * n > MAX_ORDER:
        raise GroupValidationError(f"group order {2 * n} exceeds cap {MAX_ORDER}")
    rot = ["e"] + ["r" if a == 1 else f"r^{a}" for a in range(1, n)]
    ref = ["s"] + ["rs" if a == 1 else f"r^{a}s" for a in range(1, n)]
    names = rot + ref

    def mul(x: int, y: int) -> int:
        a, b = x % n, x // n
        c, d = y % n, y // n
        if b == 0:
            return (a + c) % n + n * d
        return (a - c) % n + n * ((b + d) % 2)

    table = [[mul(x, y) for y in range(2 * n)] for x in range(2 * n)]
    return build_from_table(names, table)
