"""Arithmetic in the group algebra F2[G] and its regular matrix representations.

An AlgElem stores its support as a bitmask over group element indices, so
addition is XOR and multiplication is a convolution over set bits. The left
and right regular representations act on column vectors in the canonical
element order; the two actions always commute.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, List, Tuple

from .binlin import BinMatrix, iter_bits
from .errors import ElementParseError, GroupMismatchError, ShapeError
from .group_core import Group

__all__ = [
    "AlgElem",
    "alg_zero",
    "alg_identity",
    "alg_from_indices",
    "alg_add",
    "alg_mul",
    "antipode",
    "left_regular",
    "right_regular",
    "parse_element",
    "format_element",
]


@dataclass(frozen=True)
class AlgElem:
    """An element of F2[G]: bit i of support is the coefficient of g_i."""

    group: Group
    support: int

    def __post_init__(self):
        if self.support < 0 or self.support >> self.group.order:
            raise ShapeError(
                f"support {bin(self.support)} outside group of order {self.group.order}"
            )

    def indices(self) -> List[int]:
        return list(iter_bits(self.support))

    def is_zero(self) -> bool:
        return self.support == 0

    def __repr__(self) -> str:
        return f"AlgElem({format_element(self)!r})"


def alg_zero(group: Group) -> AlgElem:
    return AlgElem(group, 0)


def alg_identity(group: Group) -> AlgElem:
    return AlgElem(group, 1)


def alg_from_indices(group: Group, indices: Iterable[int]) -> AlgElem:
    support = 0
    for i in indices:
        if not 0 <= i < group.order:
            raise ShapeError(f"element index {i} outside group of order {group.order}")
        support |= 1 << i
    return AlgElem(group, support)


def _same_group(a: AlgElem, b: AlgElem) -> None:
    if a.group != b.group:
        raise GroupMismatchError("operands belong to different groups")


def alg_add(a: AlgElem, b: AlgElem) -> AlgElem:
    _same_group(a, b)
    return AlgElem(a.group, a.support ^ b.support)


def alg_mul(a: AlgElem, b: AlgElem) -> AlgElem:
    _same_group(a, b)
    table = a.group.mul_table
    out = 0
    for x in iter_bits(a.support):
        row = table[x]
        for y in iter_bits(b.support):
            out ^= 1 << row[y]
    return AlgElem(a.group, out)


def antipode(a: AlgElem) -> AlgElem:
    """Send each group element of the support to its inverse (an involution)."""
    inv = a.group.inv_table
    out = 0
    for x in iter_bits(a.support):
        out |= 1 << inv[x]
    return AlgElem(a.group, out)


def left_regular(a: AlgElem) -> BinMatrix:
    """Matrix of x -> a*x on column vectors in the canonical element order."""
    table = a.group.mul_table
    ell = a.group.order
    data = [0] * ell
    for h in iter_bits(a.support):
        row = table[h]
        for b in range(ell):
            data[row[b]] ^= 1 << b
    return BinMatrix(ell, ell, data)


def right_regular(a: AlgElem) -> BinMatrix:
    """Matrix of x -> x*a on column vectors in the canonical element order."""
    table = a.group.mul_table
    ell = a.group.order
    data = [0] * ell
    for h in iter_bits(a.support):
        for b in range(ell):
            data[table[b][h]] ^= 1 << b
    return BinMatrix(ell, ell, data)


def _power(group: Group, idx: int, k: int) -> int:
    if k < 0:
        idx = group.inv(idx)
        k = -k
    k %= group.order or 1
    out = 0
    for _ in range(k):
        out = group.mul(out, idx)
    return out


def parse_element(group: Group, text: str) -> AlgElem:
    """Parse the element grammar: '+'-joined terms of '*'-joined powered factors.

    "0" is the zero element; "e" or "1" the identity; powers use "^k".
    Factor names are matched longest-first, so juxtaposition works ("rs", "sr").
    """
    compact = "".join(text.split())
    if not compact:
        raise ElementParseError("empty element expression")
    if compact == "0":
        return AlgElem(group, 0)
    by_length = sorted(
        ((nm, i) for i, nm in enumerate(group.element_names)),
        key=lambda pair: len(pair[0]),
        reverse=True,
    )
    support = 0
    for term in compact.split("+"):
        if not term:
            raise ElementParseError(f"empty term in {text!r}")
        if term == "0":
            continue
        idx = 0
        pos = 0
        saw_factor = False
        while pos < len(term):
            if term[pos] == "*":
                if not saw_factor or pos + 1 >= len(term) or term[pos + 1] == "*":
                    raise ElementParseError(f"misplaced '*' in {text!r}")
                pos += 1
                continue
            if term[pos] == "1":
                factor = 0
                pos += 1
            else:
                for nm, i in by_length:
                    if term.startswith(nm, pos):
                        factor = i
                        pos += len(nm)
                        break
                else:
                    raise ElementParseError(
                        f"unknown token at {term[pos:]!r} in {text!r}; "
                        f"vocabulary: {', '.join(group.element_names)} plus '0' and '1'"
                    )
            if pos < len(term) and term[pos] == "^":
                pos += 1
                sign = 1
                if pos < len(term) and term[pos] == "-":
                    sign = -1
                    pos += 1
                start = pos
                while pos < len(term) and term[pos].isdigit():
                    pos += 1
                if start == pos:
                    raise ElementParseError(f"missing exponent digits in {text!r}")
                factor = _power(group, factor, sign * int(term[start:pos]))
            idx = group.mul(idx, factor)
            saw_factor = True
        if not saw_factor:
            raise ElementParseError(f"term {term!r} has no factors in {text!r}")
        support ^= 1 << idx
    return AlgElem(group, support)


def format_element(a: AlgElem) -> str:
    """Canonical text: support names joined by '+' in index order; zero is "0"."""
    if a.support == 0:
        return "0"
    return "+".join(a.group.element_names[i] for i in iter_bits(a.support))
