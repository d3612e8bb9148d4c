from __future__ import annotations

import copy
import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from ellgenus.cohom import curve_ring, point_model, projective_space
from ellgenus.errors import InvalidInput, UnsupportedScale
from ellgenus.exactnum import ONE, ZERO, Q
from ellgenus.genuscore import ell_root_jet, ell_smooth, jacobi_shift_check
from ellgenus.orbifold import (
    ActionData,
    EigenBundle,
    FixedComponent,
    PairEntry,
    action_from_json,
    commuting_pairs,
    conjecture_compare,
    ell_orbifold,
    elliptic_involution_data,
    elliptic_involution_quotient,
    fermionic_shift,
    orbifold_euler,
    orbit_characters,
    phi_factor,
    phi_jet,
    symmetric_product_data,
)
from ellgenus.qyseries import Series
from ellgenus.toricgeo import QuotientData, quotient_setup, stanley_reisner, toric_fixed_data
from ellgenus.genuscore import DivisorDatum


def S(terms, q_order=None):
    return Series.from_terms(terms, q_order=q_order)


def trivial_action(X):
    comp = FixedComponent(X, [EigenBundle(0, 0, X.dim, list(X.tangent_chern))])
    return ActionData(1, X.dim, [PairEntry(1, [comp])])


# ---------------------------------------------------------------- Phi factors


def test_phi_untwisted_is_root_factor():
    assert phi_jet(0, 0, 2, 2).c == ell_root_jet(2, 2).c


def test_phi_g_twisted_q0():
    # th(-1/y) / th(-1) = (y^-1/2 + y^1/2) / 2 at q^0
    c0 = phi_jet(Q(1, 2), 0, 1, 1).c[0].to_rational()
    assert c0 == S({(Q(-1, 2), 0): Q(1, 2), (Q(1, 2), 0): Q(1, 2)}, 1)


def test_phi_h_twisted_structure():
    # (1 - q^1/2 y)(1 - q^1/2 / y) / (1 - q^1/2)^2 + O(q)
    c0 = phi_jet(0, Q(1, 2), 1, 1).c[0]
    for y, q, _ in c0.terms():
        assert (2 * q).denominator == 1
    assert c0.q_row(0) == {0: 1}
    assert c0.q_row(Q(1, 2)) == {-1: -1, 0: 2, 1: -1}


def test_phi_factor_needs_nilpotent():
    P1 = projective_space(1)
    with pytest.raises(InvalidInput):
        phi_factor(Q(1, 2), 0, P1.one(), 2)
    s = phi_factor(Q(1, 2), Q(1, 2), P1.gen("h"), 1)
    assert s.num_terms() > 0


# ---------------------------------------------------------------- data validation and shifts


def test_eigenbundle_validation():
    with pytest.raises(InvalidInput):
        EigenBundle(1, 0, 1, [ONE])
    with pytest.raises(InvalidInput):
        EigenBundle(0, Q(-1, 2), 1, [ONE])
    with pytest.raises(InvalidInput):
        EigenBundle(0, 0, 0, [ONE])
    pt = point_model()
    with pytest.raises(InvalidInput):
        FixedComponent(pt, [EigenBundle(0, 0, 1, [pt.one()])])
    with pytest.raises(InvalidInput):
        ActionData(2, 2, [PairEntry(1, [FixedComponent(pt, [EigenBundle(Q(1, 2), 0, 1, [pt.one()])])])])


def test_fermionic_shift_examples():
    pt = point_model()
    c = FixedComponent(pt, [EigenBundle(Q(1, 2), 0, 2, [pt.one()])])
    assert fermionic_shift(c) == 0
    c = FixedComponent(pt, [EigenBundle(0, Q(1, 3), 1, [pt.one()])])
    assert fermionic_shift(c) == Q(1, 3)
    assert fermionic_shift(c, "g") == 0
    with pytest.raises(InvalidInput):
        fermionic_shift(c, "k")


def test_fermionic_shift_on_diagonal():
    # the 2-cycle on X x X: eigenvalues 0 and 1/2, each of rank dim X
    for X in (projective_space(1), projective_space(2)):
        a = symmetric_product_data(X, 2, group=False)
        entry = next(p for p in a.pairs if p.label == ((1, 0), (1, 0)))
        (comp,) = entry.components
        assert fermionic_shift(comp) == Q(X.dim, 2)


# ---------------------------------------------------------------- orbifold genus


@pytest.mark.parametrize("X", [projective_space(1), projective_space(2)])
def test_trivial_group_gives_smooth_genus(X):
    assert ell_orbifold(trivial_action(X), 3) == ell_smooth(X, 3)


def test_euler_specialization_matches_direct_count(p1_fan, p2_fan):
    actions = [
        toric_fixed_data(p1_fan, QuotientData(((2,),))),
        toric_fixed_data(p1_fan, QuotientData(((3,),))),
        toric_fixed_data(p2_fan, QuotientData(((1, 1), (-1, 2)))),
        elliptic_involution_data(),
        symmetric_product_data(projective_space(1), 3),
    ]
    for a in actions:
        assert ell_orbifold(a, 1).euler_number() == orbifold_euler(a)


def test_orbifold_results_are_rational(p1_fan):
    g = ell_orbifold(toric_fixed_data(p1_fan, QuotientData(((3,),))), 2)
    for _, q, c in g.series.terms():
        assert isinstance(c, type(ONE)) and q >= 0


def test_inconsistent_action_is_rejected():
    # a single h-twisted point without its partners leaves cyclotomic terms behind
    pt = point_model()
    comp = FixedComponent(pt, [EigenBundle(Q(1, 3), 0, 1, [pt.one()])])
    with pytest.raises(InvalidInput):
        ell_orbifold(ActionData(3, 1, [PairEntry(1, [comp])]), 1)


def test_elliptic_involution_is_jacobi_for_the_doubled_lattice():
    g = ell_orbifold(elliptic_involution_data(), 3)
    reports = jacobi_shift_check(g, 1, 2)
    assert reports[0].passed and reports[0].checked > 0
    assert reports[2].passed


# ---------------------------------------------------------------- symmetric products


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_commuting_pair_counts(n):
    assert len(commuting_pairs(n)) == oracles.commuting_pair_count(n)
    a = symmetric_product_data(projective_space(1), n)
    assert a.pair_count() == oracles.commuting_pair_count(n)


def test_symmetric_product_n1_is_trivial():
    X = projective_space(1)
    a = symmetric_product_data(X, 1)
    assert a.group_order == 1 and a.pair_count() == 1
    assert ell_orbifold(a, 2) == ell_smooth(X, 2)


def test_transposition_characters():
    s = (1, 0)
    e = (0, 1)
    assert sorted(orbit_characters(s, s, [0, 1])) == [(0, 0), (Q(1, 2), Q(1, 2))]
    assert sorted(orbit_characters(e, s, [0, 1])) == [(0, 0), (0, Q(1, 2))]
    assert sorted(orbit_characters(s, e, [0, 1])) == [(0, 0), (Q(1, 2), 0)]


def test_symmetric_product_components():
    X = projective_space(1)
    a = symmetric_product_data(X, 2, group=False)
    ee = next(p for p in a.pairs if p.label == ((0, 1), (0, 1)))
    assert ee.components[0].ring.dim == 2
    ss = next(p for p in a.pairs if p.label == ((1, 0), (1, 0)))
    lams = sorted((b.lambda_g, b.lambda_h) for b in ss.components[0].eigenbundles)
    assert lams == [(0, 0), (Q(1, 2), Q(1, 2))]


def test_symmetric_product_grouping_is_harmless():
    X = projective_space(1)
    for n in (2, 3):
        assert ell_orbifold(symmetric_product_data(X, n), 2) == ell_orbifold(
            symmetric_product_data(X, n, group=False), 2
        )


def test_symmetric_product_limits():
    with pytest.raises(UnsupportedScale):
        symmetric_product_data(projective_space(1), 5)
    with pytest.raises(InvalidInput):
        symmetric_product_data(projective_space(1), -1)
    assert symmetric_product_data(projective_space(1), 0).ambient_dim == 0


@pytest.mark.parametrize("n,expect", [(1, 2), (2, 5), (3, 10)])
def test_symmetric_product_euler(n, expect):
    # coefficients of prod (1 - t^i)^-2
    assert orbifold_euler(symmetric_product_data(projective_space(1), n)) == expect


# ---------------------------------------------------------------- conjecture harness


def test_conjecture_trivial_group():
    X = projective_space(2)
    assert conjecture_compare(trivial_action(X), (X, []), q_order=2).passed


@pytest.mark.parametrize("mat", [((2,),), ((3,),)])
def test_conjecture_toric_p1(mat, p1_fan):
    q = QuotientData(mat)
    qs = quotient_setup(p1_fan, q)
    Y = stanley_reisner(qs.fan)
    divs = [DivisorDatum(Y.gen(f"x{i + 1}"), -d) for i, d in enumerate(qs.delta)]
    rep = conjecture_compare(toric_fixed_data(p1_fan, q), (Y, divs), q_order=2)
    assert rep.passed, rep.first_mismatch


def test_conjecture_elliptic_involution():
    rep = conjecture_compare(elliptic_involution_data(), elliptic_involution_quotient(4), q_order=2)
    assert rep.passed
    bad = conjecture_compare(elliptic_involution_data(), elliptic_involution_quotient(2), q_order=2)
    assert not bad.passed
    assert bad.first_mismatch == {"y": "0", "q": "0", "lhs": "4", "rhs": "2"}
    assert json.loads(json.dumps(bad.to_json()))["pass"] is False


def test_conjecture_dimension_check():
    with pytest.raises(InvalidInput):
        conjecture_compare(elliptic_involution_data(), (projective_space(2), []), q_order=1)


# ---------------------------------------------------------------- JSON


ACTION = {
    "group_order": 2,
    "ambient_dim": 1,
    "provenance": "test",
    "pairs": [
        {
            "multiplicity": 1,
            "components": [
                {
                    "ring": {"kind": "ring", "dim": 1, "generators": [{"name": "h", "degree": 1}],
                             "relations": ["h^2"], "normalization": "h", "tangent_chern": "1"},
                    "eigenbundles": [{"lambda_g": "0", "lambda_h": "0", "rank": 1, "chern": ["0"]}],
                }
            ],
        },
    ]
    + [
        {
            "multiplicity": 1,
            "components": [
                {"ring": "point", "eigenbundles": [{"lambda_g": g, "lambda_h": h, "rank": 1, "chern": []}]}
            ]
            * 4,
        }
        for g, h in (("0", "1/2"), ("1/2", "0"), ("1/2", "1/2"))
    ],
}


def test_action_from_json_matches_builtin():
    a = action_from_json(ACTION)
    assert ell_orbifold(a, 2) == ell_orbifold(elliptic_involution_data(), 2)


def test_action_from_json_errors():
    bad = copy.deepcopy(ACTION)
    bad["pairs"][0]["components"][0]["eigenbundles"][0]["colour"] = 1
    with pytest.raises(InvalidInput):
        action_from_json(bad)
    bad = copy.deepcopy(ACTION)
    bad["pairs"][1]["components"][0]["ring"] = "nowhere"
    with pytest.raises(InvalidInput):
        action_from_json(bad)
    bad = copy.deepcopy(ACTION)
    del bad["group_order"]
    with pytest.raises(InvalidInput):
        action_from_json(bad)
    with pytest.raises(InvalidInput):
        action_from_json({**ACTION, "extra": 1})


@given(st.sampled_from([Q(1, 2), Q(1, 3), Q(2, 3), Q(1, 4)]))
def test_point_pairs_average_to_rational(lam):
    # a full Z/k orbit of characters on a point gives a rational sum
    k = lam.denominator
    pt = point_model()
    pairs = []
    for i in range(k):
        for j in range(k):
            comp = FixedComponent(pt, [EigenBundle(frac(i * lam), frac(j * lam), 1, [pt.one()])]) if (i or j) else None
            if comp is None:
                continue
            pairs.append(PairEntry(1, [comp]))
    # add a 1-dimensional identity sector so the ambient dimension is consistent
    E = curve_ring(1)
    pairs.append(PairEntry(1, [FixedComponent(E, [EigenBundle(0, 0, 1, list(E.tangent_chern))])]))
    g = ell_orbifold(ActionData(k, 1, pairs), 1)
    assert all(isinstance(c, type(ONE)) for _, _, c in g.series.terms())


def frac(x):
    return x - (x.numerator // x.denominator)
