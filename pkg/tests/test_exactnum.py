from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ellgenus.errors import CapacityError, InvalidInput, RationalityFailure
from ellgenus.exactnum import (
    ONE,
    ZERO,
    Cyclotomic,
    Q,
    as_rational,
    caps,
    check_denom,
    cyc_arith,
    cyc_root_of_unity,
    cyc_to_rational,
    cyclotomic_polynomial,
    fmt_rational,
    frac_part,
    root_of_unity,
    scalar_from_json,
    scalar_to_json,
)

ORDERS = [3, 4, 5, 6, 8, 12]
small = st.fractions(min_value=-5, max_value=5, max_denominator=7)


@st.composite
def cyclotomics(draw, order=None):
    n = order or draw(st.sampled_from(ORDERS))
    deg = len(cyclotomic_polynomial(n)) - 1
    return Cyclotomic(n, [draw(small) for _ in range(deg)])


def test_cyclotomic_polynomials():
    assert cyclotomic_polynomial(1) == (-1, 1)
    assert cyclotomic_polynomial(4) == (1, 0, 1)
    assert cyclotomic_polynomial(6) == (1, -1, 1)
    assert cyclotomic_polynomial(12) == (1, 0, -1, 0, 1)


def test_roots_of_unity():
    z = cyc_root_of_unity(1, 6)
    assert z ** 6 == ONE
    assert z ** 3 == -ONE
    assert z ** 2 - z + 1 == ZERO
    assert root_of_unity(Q(1, 2)) == -1
    assert root_of_unity(3) == 1
    i = root_of_unity(Q(1, 4))
    assert i * i == -1


def test_primitive_roots_sum_to_mobius():
    # sum of primitive n-th roots is mu(n)
    for n, mu in ((3, -1), (4, 0), (5, -1), (6, 1), (12, 0)):
        tot = sum((cyc_root_of_unity(k, n) for k in range(1, n) if Fraction(k, n).denominator == n), ZERO)
        assert cyc_to_rational(tot) == mu


def test_rationality_failure():
    with pytest.raises(RationalityFailure):
        cyc_to_rational(cyc_root_of_unity(1, 3))
    assert cyc_to_rational(cyc_root_of_unity(1, 3) + cyc_root_of_unity(2, 3)) == -1


def test_rational_helpers():
    assert as_rational("3/6") == Q(1, 2)
    assert fmt_rational(Q(-4, 6)) == "-2/3"
    assert frac_part(Q(-1, 3)) == Q(2, 3)
    with pytest.raises(InvalidInput):
        as_rational("one half")
    with pytest.raises(InvalidInput):
        as_rational(True)


def test_caps():
    with caps(denom=4):
        assert check_denom(4) == 4
        with pytest.raises(CapacityError):
            check_denom(6)
    with caps(cyclotomic=5):
        with pytest.raises(CapacityError):
            cyc_root_of_unity(1, 8)
    assert cyc_root_of_unity(1, 8) ** 8 == ONE


def test_cyc_arith_dispatch():
    z = cyc_root_of_unity(1, 5)
    assert cyc_arith(z, 2, "add") == z + 2
    assert cyc_arith(z, None, "inv") * z == ONE
    with pytest.raises(InvalidInput):
        cyc_arith(z, z, "pow")


@st.composite
def triples(draw):
    n = draw(st.sampled_from(ORDERS))
    return tuple(draw(cyclotomics(n)) for _ in range(3))


@given(triples())
def test_field_axioms(abc):
    a, b, c = abc
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a


@given(cyclotomics())
def test_inverse(a):
    if a:
        assert a * a.inv() == ONE
        assert (a / a) == ONE


@given(cyclotomics(), st.sampled_from([2, 3]))
def test_embedding_is_a_homomorphism(a, k):
    n = a.order * k
    with caps(cyclotomic=n):
        b = a.embed(n)
        assert b == a
        assert (b * b).embed(n) == (a * a).embed(n)


def test_mixed_orders_align():
    a = cyc_root_of_unity(1, 4)
    b = cyc_root_of_unity(1, 3)
    # i * w is a primitive 12th root of unity
    assert (a * b) ** 12 == ONE
    assert (a * b) ** 6 == -ONE


@given(cyclotomics())
def test_galois_trace_is_rational(a):
    # the sum over all Galois conjugates is rational
    n = a.order
    tot = ZERO
    for k in range(1, n + 1):
        if Fraction(k, n).denominator != n:
            continue
        z = cyc_root_of_unity(k, n)
        conj = sum((c * z ** i for i, c in enumerate(a.coeffs)), ZERO)
        tot = tot + conj
    assert isinstance(cyc_to_rational(tot), type(ONE))


@given(st.one_of(small, cyclotomics()))
def test_json_roundtrip(x):
    x = as_rational(x) if isinstance(x, Fraction) else x
    assert scalar_from_json(scalar_to_json(x)) == x
