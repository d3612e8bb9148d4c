from __future__ import annotations

import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ellgenus.cohom import projective_space
from ellgenus.errors import InvalidInput, UnsupportedScale
from ellgenus.exactnum import Q
from ellgenus.genuscore import ell_smooth
from ellgenus.orbifold import orbifold_euler
from ellgenus.toricgeo import (
    Fan,
    PLFunction,
    QuotientData,
    fan_validate,
    lattice_f,
    quotient_pair_genus,
    quotient_setup,
    refinement_discrepancies,
    resolve_rank2,
    stanley_reisner,
    toric_fixed_data,
    toric_singular_genus,
    unit_deg,
)


def blowup(f: Fan, cone_index: int) -> Fan:
    """Star subdivision of a 2-cone at the sum of its rays."""
    i, j = f.max_cones[cone_index]
    u, v = f.rays[i], f.rays[j]
    w = (u[0] + v[0], u[1] + v[1])
    rays = f.rays + (w,)
    k = len(rays) - 1
    cones = [c for n, c in enumerate(f.max_cones) if n != cone_index] + [(i, k), (j, k)]
    return Fan(2, rays, tuple(cones))


@st.composite
def blown_up_fans(draw, steps=3):
    f = Fan(2, ((1, 0), (0, 1), (-1, -1)), ((0, 1), (1, 2), (0, 2)))
    rng = random.Random(draw(st.integers(0, 10 ** 6)))
    for _ in range(draw(st.integers(0, steps))):
        f = blowup(f, rng.randrange(len(f.max_cones)))
    return f


# ---------------------------------------------------------------- validation


def test_fan_validate_examples(p1_fan, p2_fan, a1_coarse):
    assert fan_validate(p1_fan) == {"smooth": True, "complete": True, "simplicial": True}
    assert fan_validate(p2_fan)["smooth"] and fan_validate(p2_fan)["complete"]
    v = fan_validate(a1_coarse)
    assert v["complete"] and not v["smooth"]


def test_fan_validate_incomplete_and_malformed():
    half = Fan(2, ((1, 0), (0, 1)), ((0, 1),))
    assert not fan_validate(half)["complete"]
    with pytest.raises(InvalidInput):
        Fan(2, ((2, 0), (0, 1)), ((0, 1),))
    with pytest.raises(InvalidInput):
        Fan(2, ((1, 0), (0, 1)), ((0, 5),))
    overlap = Fan(2, ((1, 0), (0, 1), (1, 1)), ((0, 1), (0, 2)))
    with pytest.raises(InvalidInput):
        fan_validate(overlap)
    with pytest.raises(UnsupportedScale):
        fan_validate(Fan(4, ((1, 0, 0, 0),), ((0,),)))


def test_fan_json_roundtrip(p2_fan):
    assert Fan.from_json(p2_fan.to_json()) == p2_fan
    with pytest.raises(InvalidInput):
        Fan.from_json({**p2_fan.to_json(), "extra": 1})


def test_stanley_reisner_examples(p1_fan):
    R = stanley_reisner(p1_fan)
    assert R.basis_size() == 2
    assert R.integrate(R.gen("x1")) == 1 and R.integrate(R.gen("x2")) == 1


def test_stanley_reisner_rejects_singular(a1_coarse):
    with pytest.raises(InvalidInput):
        stanley_reisner(a1_coarse)


@given(blown_up_fans())
def test_random_smooth_fans(f):
    v = fan_validate(f)
    assert v["smooth"] and v["complete"]
    R = stanley_reisner(f)
    assert R.basis_size() == len(f.max_cones)
    assert R.euler_number() == len(f.max_cones)
    for c in f.max_cones:
        prod = R.one()
        for i in c:
            prod = prod * R.gen(f"x{i + 1}")
        assert R.integrate(prod) == 1
    # Todd genus of a smooth rational surface is 1
    g = ell_smooth(R, 1)
    assert g.euler_number() == len(f.max_cones)
    assert g.q0_row()[Q(-1)] == 1


# ---------------------------------------------------------------- discrepancies


def test_discrepancy_examples(a1_coarse, f2_fan, p2_fan):
    d = refinement_discrepancies(a1_coarse, None, f2_fan)
    assert d.entries == [(3, 0)] and d.log_terminal
    assert refinement_discrepancies(p2_fan, None, p2_fan).entries == []
    blown = blowup(p2_fan, 0)
    d = refinement_discrepancies(p2_fan, None, blown)
    assert d.entries == [(3, 1)]


def test_discrepancy_rejects_non_refinement(p2_fan, a1_coarse):
    with pytest.raises(InvalidInput):
        refinement_discrepancies(p2_fan, None, a1_coarse)


@given(blown_up_fans(steps=2), st.integers(0, 10 ** 6))
def test_discrepancies_are_transitive(mid, seed):
    coarse = Fan(2, ((1, 0), (0, 1), (-1, -1)), ((0, 1), (1, 2), (0, 2)))
    fine = blowup(mid, random.Random(seed).randrange(len(mid.max_cones)))
    direct = refinement_discrepancies(coarse, None, fine).all_alpha
    mid_deg = PLFunction(tuple(a + 1 for a in refinement_discrepancies(coarse, None, mid).all_alpha))
    two_step = refinement_discrepancies(mid, mid_deg, fine).all_alpha
    assert direct == two_step


# ---------------------------------------------------------------- resolution and singular genera


def test_resolve_rank2(a1_coarse, f2_fan):
    r = resolve_rank2(a1_coarse)
    assert fan_validate(r)["smooth"]
    assert set(r.rays) == set(f2_fan.rays)
    # a 1/3(1,1) cone needs one ray, a 1/3(1,2) cone needs two
    c = resolve_rank2(Fan(2, ((1, 0), (1, 3), (-2, -3)), ((0, 1), (1, 2), (0, 2))))
    assert fan_validate(c)["smooth"] and fan_validate(c)["complete"]


def test_a1_resolution_independence(a1_coarse, f2_fan, a1_blowup):
    g1 = toric_singular_genus(a1_coarse, f2_fan, 3)
    g2 = toric_singular_genus(a1_coarse, a1_blowup, 3)
    assert g1 == g2
    assert g1.q0_row() == {-1: 1, 0: 2, 1: 1}


def test_crepant_resolution_is_smooth_genus(a1_coarse, f2_fan):
    g = toric_singular_genus(a1_coarse, f2_fan, 3)
    assert g == ell_smooth(stanley_reisner(f2_fan), 3)


# ---------------------------------------------------------------- quotients


def test_quotient_setup_examples(p1_fan):
    qs = quotient_setup(p1_fan, QuotientData(((2,),)))
    assert qs.nu == [2, 2] and qs.delta == [Q(1, 2), Q(1, 2)]
    assert qs.deg.values == (Q(1, 2), Q(1, 2))
    assert quotient_setup(p1_fan, QuotientData(((1,),))).delta == [0, 0]
    assert quotient_setup(p1_fan, QuotientData(((3,),))).delta == [Q(2, 3), Q(2, 3)]
    with pytest.raises(InvalidInput):
        QuotientData(((1, 2), (2, 4)))


def test_quotient_group_elements():
    q = QuotientData(((3, 0), (0, 3)))
    assert q.order == 9 and len(q.elements()) == 9
    assert q.elements()[0] == (0, 0)


def test_fixed_data_p1_z2(p1_fan):
    a = toric_fixed_data(p1_fan, QuotientData(((2,),)))
    assert a.group_order == 2 and len(a.pairs) == 4
    ee = a.pairs[0]
    assert len(ee.components) == 1 and ee.components[0].ring.dim == 1
    for entry in a.pairs[1:]:
        assert len(entry.components) == 2
        for c in entry.components:
            assert c.ring.dim == 0
            (b,) = c.eigenbundles
            assert b.rank == 1
            assert {b.lambda_g, b.lambda_h} <= {0, Q(1, 2)}
    assert orbifold_euler(a) == 4


def test_fixed_data_p1_z3_characters(p1_fan):
    a = toric_fixed_data(p1_fan, QuotientData(((3,),)))
    g = a.pairs[4]  # (g, g) with g the first nontrivial element
    assert g.label[0] == g.label[1] != (0,)
    chars = sorted(c.eigenbundles[0].lambda_g for c in g.components)
    assert chars == [Q(1, 3), Q(2, 3)]


def test_fixed_data_trivial_group(p2_fan):
    a = toric_fixed_data(p2_fan, QuotientData(((1, 0), (0, 1))))
    assert len(a.pairs) == 1
    (c,) = a.pairs[0].components
    assert c.ring.dim == 2 and orbifold_euler(a) == 3


@pytest.mark.parametrize(
    "fan,mat,expect",
    [
        ("p1", ((2,),), 4),
        ("p1", ((3,),), 6),
        ("p2", ((1, 1), (-1, 2)), 9),
    ],
)
def test_orbifold_euler_of_toric_quotients(fan, mat, expect, p1_fan, p2_fan):
    f = {"p1": p1_fan, "p2": p2_fan}[fan]
    q = QuotientData(mat)
    a = toric_fixed_data(f, q)
    assert orbifold_euler(a) == expect
    # the stringy Euler number of the pair equals the orbifold Euler number
    g = quotient_pair_genus(f, q, 1, convention="ell")
    assert g.euler_number() == expect


def test_fixed_data_rank3_unsupported():
    P3 = Fan(3, ((1, 0, 0), (0, 1, 0), (0, 0, 1), (-1, -1, -1)), ((0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)))
    with pytest.raises(UnsupportedScale):
        toric_fixed_data(P3, QuotientData(((2, 0, 0), (0, 1, 0), (0, 0, 1))))


# ---------------------------------------------------------------- lattice-sum form


def test_lattice_f_p1(p1_fan):
    g = lattice_f(p1_fan, None, 2)
    assert g.equals(ell_smooth(projective_space(1), 2, convention="hat"))


def test_lattice_f_p1_quotient(p1_fan):
    qs = quotient_setup(p1_fan, QuotientData(((2,),)))
    g = lattice_f(qs.fan, qs.deg, 2)
    ref = quotient_pair_genus(p1_fan, QuotientData(((2,),)), 2, convention="hat")
    assert g.equals(ref)


def test_lattice_f_rejects_bad_input(p1_fan):
    with pytest.raises(InvalidInput):
        lattice_f(p1_fan, PLFunction((1, 0)), 2)
    P3 = Fan(3, ((1, 0, 0), (0, 1, 0), (0, 0, 1), (-1, -1, -1)), ((0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)))
    with pytest.raises(UnsupportedScale):
        lattice_f(P3, None, 2)
    assert unit_deg(p1_fan).values == (1, 1)
