"""Group algebra arithmetic, element grammar, regular representations."""

from __future__ import annotations

import random

import pytest

from twistbundle import (
    alg_add,
    alg_from_indices,
    alg_identity,
    alg_mul,
    alg_zero,
    antipode,
    build_cyclic,
    build_dihedral,
    format_element,
    gf2_mul,
    gf2_rank,
    left_regular,
    parse_element,
    right_regular,
    transpose,
)
from twistbundle.errors import ElementParseError, GroupMismatchError
from twistbundle.group_algebra import AlgElem

D3 = build_dihedral(3)
Z6 = build_cyclic(6)


def rand_elem(rng: random.Random, group) -> AlgElem:
    return AlgElem(group, rng.randrange(1 << group.order))


def test_parse_basics():
    assert parse_element(D3, "0").is_zero()
    assert parse_element(D3, "1") == alg_identity(D3)
    assert parse_element(D3, "e") == alg_identity(D3)
    assert parse_element(D3, "r+r^2") == alg_from_indices(D3, [1, 2])
    assert parse_element(D3, " r + s ") == alg_from_indices(D3, [1, 3])


def test_parse_powers_and_products():
    assert parse_element(D3, "r^3") == alg_identity(D3)
    assert parse_element(D3, "r^-1") == parse_element(D3, "r^2")
    assert parse_element(D3, "s*r") == parse_element(D3, "r^2s")
    assert parse_element(D3, "r*s") == parse_element(D3, "rs")
    # longest-name match: "rs" is a single element, so rs^2 = (rs)^2 = e
    assert parse_element(D3, "rs^2") == alg_identity(D3)
    assert parse_element(D3, "s^2") == alg_identity(D3)


def test_parse_cancellation():
    assert parse_element(D3, "1+1").is_zero()
    assert parse_element(D3, "e+r+e") == alg_from_indices(D3, [1])
    assert parse_element(D3, "r+0+r^2") == alg_from_indices(D3, [1, 2])


def test_parse_errors():
    for bad in ("", "q", "r^", "r^x", "+r", "r+", "r**s", "r^2^3x", "(r)"):
        with pytest.raises(ElementParseError):
            parse_element(D3, bad)


def test_format_round_trip():
    rng = random.Random(11)
    for _ in range(100):
        a = rand_elem(rng, D3)
        assert parse_element(D3, format_element(a)) == a
    assert format_element(alg_zero(D3)) == "0"
    assert format_element(alg_identity(D3)) == "e"


def test_algebra_identities():
    one = alg_identity(D3)
    r = parse_element(D3, "r")
    x = alg_add(one, r)
    # (1+r)^2 = 1 + r^2 in characteristic 2
    assert alg_mul(x, x) == parse_element(D3, "1+r^2")
    # 1 + r + r^2 is idempotent
    y = parse_element(D3, "1+r+r^2")
    assert alg_mul(y, y) == y


def test_mul_properties():
    rng = random.Random(13)
    zero, one = alg_zero(D3), alg_identity(D3)
    for _ in range(50):
        a, b, c = (rand_elem(rng, D3) for _ in range(3))
        assert alg_mul(a, alg_mul(b, c)) == alg_mul(alg_mul(a, b), c)
        assert alg_mul(a, alg_add(b, c)) == alg_add(alg_mul(a, b), alg_mul(a, c))
        assert alg_mul(zero, a).is_zero()
        assert alg_mul(one, a) == a
        assert alg_mul(a, one) == a


def test_noncommutative():
    r, s = parse_element(D3, "r"), parse_element(D3, "s")
    assert alg_mul(r, s) != alg_mul(s, r)
    assert alg_mul(s, r) == parse_element(D3, "r^2s")


def test_antipode():
    rng = random.Random(17)
    assert antipode(parse_element(D3, "r")) == parse_element(D3, "r^2")
    assert antipode(parse_element(D3, "s")) == parse_element(D3, "s")
    for _ in range(50):
        a, b = rand_elem(rng, D3), rand_elem(rng, D3)
        assert antipode(antipode(a)) == a
        assert antipode(alg_mul(a, b)) == alg_mul(antipode(b), antipode(a))
        assert antipode(alg_add(a, b)) == alg_add(antipode(a), antipode(b))


def test_group_mismatch():
    with pytest.raises(GroupMismatchError):
        alg_add(alg_identity(D3), alg_identity(Z6))
    with pytest.raises(GroupMismatchError):
        alg_mul(alg_identity(D3), alg_identity(Z6))


def test_regular_representation_homomorphisms():
    rng = random.Random(19)
    for _ in range(30):
        a, b = rand_elem(rng, D3), rand_elem(rng, D3)
        la, lb = left_regular(a), left_regular(b)
        ra, rb = right_regular(a), right_regular(b)
        # left is multiplicative, right is anti-multiplicative
        assert left_regular(alg_mul(a, b)) == gf2_mul(la, lb)
        assert right_regular(alg_mul(a, b)) == gf2_mul(rb, ra)
        # the two actions always commute
        assert gf2_mul(la, rb) == gf2_mul(rb, la)
        # additivity
        assert left_regular(alg_add(a, b)).data == tuple(
            x ^ y for x, y in zip(la.data, lb.data)
        )


def test_regular_representation_faithful():
    seen = {}
    for mask in range(1 << D3.order):
        key = left_regular(AlgElem(D3, mask)).data
        assert key not in seen
        seen[key] = mask


def test_regular_representation_columns():
    # column b of left_regular(a) is the indicator of a*g_b
    r = parse_element(D3, "r")
    lr = left_regular(r)
    for b in range(D3.order):
        col = [(lr.data[i] >> b) & 1 for i in range(D3.order)]
        assert col == [1 if i == D3.mul(1, b) else 0 for i in range(D3.order)]
    rr = right_regular(r)
    for b in range(D3.order):
        col = [(rr.data[i] >> b) & 1 for i in range(D3.order)]
        assert col == [1 if i == D3.mul(b, 1) else 0 for i in range(D3.order)]


def test_transpose_antipode_relation():
    rng = random.Random(23)
    for _ in range(30):
        a = rand_elem(rng, D3)
        assert transpose(left_regular(a)) == left_regular(antipode(a))
        assert transpose(right_regular(a)) == right_regular(antipode(a))


def test_single_element_representations_invertible():
    for g in range(D3.order):
        a = AlgElem(D3, 1 << g)
        assert gf2_rank(left_regular(a)) == D3.order
        assert gf2_rank(right_regular(a)) == D3.order


def test_abelian_regular_representations_agree():
    rng = random.Random(29)
    for _ in range(20):
        a = rand_elem(rng, Z6)
        assert left_regular(a) == right_regular(a)
