from __future__ import annotations

import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ellgenus.cohom import (
    ChernNumberModel,
    chern_monomial,
    chern_numbers_from_json,
    chern_numbers_of,
    conjugate,
    curve_ring,
    formal_surface,
    from_presentation,
    monomial_in_elementary,
    partitions,
    point_model,
    power_model,
    product_model,
    projective_space,
    ring_from_json,
)
from ellgenus.errors import InvalidInput
from ellgenus.exactnum import Q
from ellgenus.toricgeo import stanley_reisner


def test_projective_space_integrals():
    for n in (1, 2, 3):
        P = projective_space(n)
        h = P.gen("h")
        assert P.integrate(h ** n) == 1
        assert P.euler_number() == n + 1
        # c_1^n = (n+1)^n
        assert P.integrate(P.chern(1) ** n) == (n + 1) ** n


def test_curve_ring():
    E = curve_ring(1)
    assert E.euler_number() == 0
    assert curve_ring(0).euler_number() == 2
    assert curve_ring(3).euler_number() == -4


def test_point_model():
    pt = point_model()
    assert pt.dim == 0
    assert pt.integrate(pt.one()) == 1
    assert pt.euler_number() == 1


def test_stanley_reisner_euler_numbers(p2_fan, f2_fan, a1_blowup):
    assert stanley_reisner(p2_fan).euler_number() == 3
    assert stanley_reisner(f2_fan).euler_number() == 4
    assert stanley_reisner(a1_blowup).euler_number() == 5


def test_stanley_reisner_matches_presentation(p2_fan):
    sr = stanley_reisner(p2_fan)
    P2 = projective_space(2)
    assert chern_numbers_of(sr) == chern_numbers_of(P2)


def test_hirzebruch_surface_chern_numbers(f2_fan):
    cn = chern_numbers_of(stanley_reisner(f2_fan))
    assert cn.chern_number((1, 1)) == 8
    assert cn.chern_number((2,)) == 4


def test_product_model():
    P1 = projective_space(1)
    X = product_model(P1, P1)
    assert X.dim == 2
    cn = chern_numbers_of(X)
    assert cn.chern_number((1, 1)) == 8 and cn.chern_number((2,)) == 4
    assert power_model(P1, 0).dim == 0
    h1 = X.factor_embedding(0, P1.gen("h"))
    h2 = X.factor_embedding(1, P1.gen("h"))
    assert X.integrate(h1 * h2) == 1
    assert X.integrate(h1 * h1) == 0


def test_presentation_errors():
    with pytest.raises(InvalidInput):
        from_presentation([("h", 1)], ["h^3"], 2, "h", None)
    with pytest.raises(InvalidInput):
        from_presentation([("h", 1)], ["h^2"], 2, "h^2", None)


def test_ring_from_json():
    doc = {
        "kind": "ring",
        "dim": 2,
        "generators": [{"name": "h", "degree": 1}],
        "relations": ["h^3"],
        "normalization": "h^2",
        "tangent_chern": "(1+h)^3",
    }
    R = ring_from_json(doc)
    assert R.same_structure(projective_space(2))
    assert R.to_json()["basis"] == ["1", "h", "h^2"]
    with pytest.raises(InvalidInput):
        ring_from_json({**doc, "bogus": 1})


def test_chern_number_model():
    S = formal_surface(9, 3)
    assert S.euler_number() == 3
    assert chern_numbers_from_json(S.to_json()) == S
    with pytest.raises(InvalidInput):
        ChernNumberModel(2, {(2,): 3})


def test_partitions_and_conjugates():
    assert partitions(4) == ((4,), (3, 1), (2, 2), (2, 1, 1), (1, 1, 1, 1))
    assert conjugate((3, 1)) == (2, 1, 1)
    for n in range(1, 8):
        for p in partitions(n):
            assert conjugate(conjugate(p)) == p


def test_monomial_in_elementary_examples():
    # m_2 = e_1^2 - 2 e_2, m_{1,1} = e_2
    assert monomial_in_elementary((2,)) == {(1, 1): 1, (2,): -2}
    assert monomial_in_elementary((1, 1)) == {(2,): 1}
    # power sum p_3 = e_1^3 - 3 e_1 e_2 + 3 e_3
    assert monomial_in_elementary((3,)) == {(1, 1, 1): 1, (2, 1): -3, (3,): 3}


def _elementary(roots, k):
    import itertools

    return sum(math.prod(c) for c in itertools.combinations(roots, k))


def _monomial(roots, lam):
    import itertools

    seen = set()
    tot = 0
    for idx in itertools.permutations(range(len(roots)), len(lam)):
        exps = [0] * len(roots)
        for i, e in zip(idx, lam):
            exps[i] = e
        t = tuple(exps)
        if t not in seen:
            seen.add(t)
            tot += math.prod(r ** e for r, e in zip(roots, exps))
    return tot


@given(
    st.lists(st.integers(-3, 3), min_size=1, max_size=4),
    st.sampled_from([p for n in range(1, 5) for p in partitions(n)]),
)
def test_monomial_expansion_numerically(roots, lam):
    if len(lam) > len(roots):
        return
    lhs = _monomial(roots, lam)
    rhs = sum(c * math.prod(_elementary(roots, i) for i in mu) for mu, c in monomial_in_elementary(lam).items())
    assert lhs == rhs


def test_chern_monomial_in_ring():
    # m_2 of the tangent roots of P^2 is c1^2 - 2 c2 = 9h^2 - 6h^2
    P2 = projective_space(2)
    classes = [P2.one(), P2.chern(1), P2.chern(2)]
    val = chern_monomial(P2, classes, (2,))
    assert P2.integrate(val) == 3


@given(st.integers(1, 4), st.integers(0, 4))
def test_product_integrals_multiply(n, k):
    P = projective_space(n)
    X = product_model(P, projective_space(1))
    h = X.factor_embedding(0, P.gen("h"))
    g = X.factor_embedding(1, projective_space(1).gen("h"))
    expect = 1 if k == n else 0
    assert X.integrate(h ** k * g) == expect
    assert X.euler_number() == 2 * (n + 1)


def test_ring_inverse():
    P2 = projective_space(2)
    c = P2.total_chern()
    assert c * c.inverse() == P2.one()
    assert P2.integrate((c.inverse()).degree_part(2)) == Q(6)
