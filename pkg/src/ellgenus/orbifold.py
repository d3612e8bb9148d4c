"""Orbifold elliptic genus from commuting-pair fixed-point data.

For a pair ``(g, h)`` and a component of ``X^{g,h}`` the tangent bundle
splits into eigenbundles ``W_lam`` on which ``g, h`` act by
``exp(2 pi i lam_g)``, ``exp(2 pi i lam_h)`` with ``lam`` in ``[0, 1)``.
Each Chern root ``x`` of ``W_lam`` contributes

    Phi = th(zeta q^(-lam_h) e^x / y) y^(lam_h) / th(zeta q^(-lam_h) e^x),   zeta = exp(2 pi i lam_g)

and the roots of ``W_(0,0)`` (the tangent bundle of the component)
contribute the smooth factor ``x th(e^x / y) / th(e^x)`` instead.  Then

    Ell_orb = 1/|G| sum_{gh = hg} int_{X^{g,h}} prod Phi.

For ``lam != (0, 0)`` the constant term of the denominator is a unit
(leading monomial ``q^(-lam_h / 2)``, or the nonzero cyclotomic number
``zeta^(1/2) - zeta^(-1/2)`` when ``lam_h = 0``), so no localization is
needed; intermediate coefficients are cyclotomic and the final sum is
checked to be rational.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

from .cohom import RingElement, RingModel, point_model, product_model
from .errors import InvalidInput, RationalityFailure, TruncationError, UnsupportedScale
from .exactnum import ONE, ZERO, Q, as_rational, cap_cached, fmt_rational, frac_part
from .genuscore import (
    GenusResult,
    Jet,
    Mono,
    _class_of_bundle,
    _ring_integrate,
    _ring_mul,
    ell_root_jet,
    ell_singular,
    jet_to_ring_series,
    make_result,
    theta_jets,
)
from .qyseries import Series

# ---------------------------------------------------------------- data


@dataclass
class EigenBundle:
    lambda_g: object
    lambda_h: object
    rank: int
    chern: list  # [c_0, c_1, ...] in the component ring

    def __post_init__(self):
        self.lambda_g = as_rational(self.lambda_g)
        self.lambda_h = as_rational(self.lambda_h)
        for lam in (self.lambda_g, self.lambda_h):
            if not (0 <= lam < 1):
                raise InvalidInput(f"character {lam} is not lifted to [0, 1)")
        if self.rank < 1:
            raise InvalidInput("eigenbundle rank must be positive")

    @property
    def is_tangent(self) -> bool:
        return self.lambda_g == 0 and self.lambda_h == 0


@dataclass
class FixedComponent:
    ring: RingModel
    eigenbundles: list
    factors: list | None = None  # optional product decomposition into FixedComponents

    def __post_init__(self):
        tangent = [b for b in self.eigenbundles if b.is_tangent]
        trank = sum(b.rank for b in tangent)
        if trank != self.ring.dim:
            raise InvalidInput(
                f"the (0,0) eigenbundle has rank {trank} but the component has dimension {self.ring.dim}"
            )

    @property
    def total_rank(self) -> int:
        return sum(b.rank for b in self.eigenbundles)

    def euler_number(self):
        if self.ring.dim == 0:
            return ONE
        tangent = [b for b in self.eigenbundles if b.is_tangent]
        c = self.ring.one()
        for b in tangent:
            tot = self.ring.zero()
            for ci in b.chern:
                tot = tot + ci
            c = c * tot
        return self.ring.integrate(c.degree_part(self.ring.dim))


@dataclass
class PairEntry:
    multiplicity: int
    components: list
    label: object = None


@dataclass
class ActionData:
    group_order: int
    ambient_dim: int
    pairs: list = field(default_factory=list)

    def __post_init__(self):
        for p in self.pairs:
            if p.multiplicity < 1:
                raise InvalidInput("pair multiplicities must be positive")
            for c in p.components:
                if c.total_rank != self.ambient_dim:
                    raise InvalidInput(
                        f"eigenbundle ranks sum to {c.total_rank}, ambient dimension is {self.ambient_dim}"
                    )

    def pair_count(self) -> int:
        return sum(p.multiplicity for p in self.pairs)


def fermionic_shift(c: FixedComponent, which: str = "h"):
    if which not in ("g", "h"):
        raise InvalidInput("fermionic shift is taken with respect to 'g' or 'h'")
    attr = "lambda_h" if which == "h" else "lambda_g"
    return sum((getattr(b, attr) * b.rank for b in c.eigenbundles), ZERO)


def orbifold_euler(a: ActionData):
    """``1/|G| sum_{gh=hg} e(X^{g,h})`` from component Euler numbers."""
    tot = ZERO
    for p in a.pairs:
        tot += p.multiplicity * sum((c.euler_number() for c in p.components), ZERO)
    return tot / a.group_order


# ---------------------------------------------------------------- Phi factors


@cap_cached(1024)
def phi_jet(lg, lh, n: int, P) -> Jet:
    lg, lh = as_rational(lg), as_rational(lh)
    if lg == 0 and lh == 0:
        return ell_root_jet(n, P)
    num = theta_jets(Mono(y=-1, q=-lh, phase=lg), n, P)
    den = theta_jets(Mono(q=-lh, phase=lg), n, P)
    jet = Jet(num) * Jet(den).inverse()
    if lh:
        jet = Jet([c.mul_monomial(ONE, lh, 0) for c in jet.c])
    return jet


def phi_factor(lg, lh, x: RingElement, q_order) -> Series:
    """``Phi(lam_g, lam_h)`` at the class ``x`` as a ring-valued series."""
    if not x.is_nilpotent():
        raise InvalidInput("Phi needs a nilpotent class")
    jet = phi_jet(as_rational(lg), as_rational(lh), x.model.dim, as_rational(q_order))
    return jet_to_ring_series(jet.c, x)


def _component_integral(c: FixedComponent, P):
    if c.factors:
        out = None
        for f in c.factors:
            v = _component_integral(f, P)
            out = v if out is None else out * v
        return out
    ring = c.ring
    cls = {ring.index[tuple([0] * len(ring.names))]: Series.one()}
    for b in c.eigenbundles:
        jet = phi_jet(b.lambda_g, b.lambda_h, ring.dim, P)
        cls = _ring_mul(ring, cls, _class_of_bundle(ring, b.rank, b.chern, jet))
    return _ring_integrate(ring, cls)


def _orbifold_value(a: ActionData, P):
    tot = None
    cache: dict = {}
    for p in a.pairs:
        for c in p.components:
            key = id(c)
            if key not in cache:
                cache[key] = _component_integral(c, P)
            v = cache[key]
            if v is None:
                continue
            v = v.scale(Q(p.multiplicity, 1)) if p.multiplicity != 1 else v
            tot = v if tot is None else tot + v
    if tot is None:
        return Series.zero(q_order=P)
    return tot.scale(Q(1, a.group_order))


def ell_orbifold(a: ActionData, q_order=4, max_margin: int = 3) -> GenusResult:
    """Orbifold elliptic genus (ell convention)."""
    Qo = as_rational(q_order)
    last = None
    for margin in range(max_margin + 1):
        val = _orbifold_value(a, Qo + margin)
        try:
            return make_result(val, a.ambient_dim, "ell", Qo)
        except TruncationError as exc:
            last = exc
        except RationalityFailure as exc:
            raise InvalidInput(f"orbifold sum is not rational; the action data is inconsistent: {exc}") from exc
    raise last


# ---------------------------------------------------------------- symmetric products


def _compose(p, q):
    return tuple(p[q[i]] for i in range(len(q)))


def commuting_pairs(n: int) -> list:
    perms = list(itertools.permutations(range(n)))
    return [(g, h) for g in perms for h in perms if _compose(g, h) == _compose(h, g)]


def _orbits(gens, n: int) -> list:
    seen, orbits = set(), []
    for s in range(n):
        if s in seen:
            continue
        orb, stack = {s}, [s]
        while stack:
            x = stack.pop()
            for g in gens:
                y = g[x]
                if y not in orb:
                    orb.add(y)
                    stack.append(y)
        seen |= orb
        orbits.append(sorted(orb))
    return orbits


def _perm_power(p, k: int):
    out = tuple(range(len(p)))
    for _ in range(k):
        out = _compose(p, out)
    return out


def orbit_characters(g, h, orbit: list) -> list:
    """Characters of ``<g,h>`` trivial on a point stabilizer, as ``(lam_g, lam_h)``."""
    k = len(orbit)
    p = orbit[0]
    fixes = []
    for a in range(k):
        ga = _perm_power(g, a)
        for b in range(k):
            w = _compose(ga, _perm_power(h, b))
            if w[p] == p:
                fixes.append((a, b))
    chars = []
    for i in range(k):
        for j in range(k):
            if all((a * i + b * j) % k == 0 for a, b in fixes):
                chars.append((Q(i, k), Q(j, k)))
    if len(chars) != k:
        raise InvalidInput("character enumeration failed")
    return chars


def symmetric_product_data(x_model: RingModel, n: int, group: bool = True) -> ActionData:
    """``(X^n, S_n)`` fixed-point data by exhaustive commuting-pair enumeration."""
    if n > 4:
        raise UnsupportedScale("symmetric products are enumerated for n <= 4")
    if n < 0:
        raise InvalidInput("n must be nonnegative")
    if not isinstance(x_model, RingModel):
        raise InvalidInput("symmetric products need a ring model")
    order = math.factorial(n)
    if n == 0:
        pt = point_model()
        return ActionData(1, 0, [PairEntry(1, [FixedComponent(pt, [])], ((), ()))])
    d = x_model.dim
    groups: dict = {}
    labels: dict = {}
    for g, h in commuting_pairs(n):
        orbit_chars = []
        for orb in _orbits([g, h], n):
            orbit_chars.append(tuple(sorted(orbit_characters(g, h, orb))))
        key = tuple(sorted(orbit_chars)) if group else (g, h)
        groups[key] = groups.get(key, 0) + 1
        labels.setdefault(key, tuple(sorted(orbit_chars)))
    comp_cache: dict = {}
    entries = []
    for key, mult in groups.items():
        chars_by_orbit = labels[key]
        if chars_by_orbit not in comp_cache:
            comp_cache[chars_by_orbit] = _sym_component(x_model, chars_by_orbit, d)
        entries.append(PairEntry(mult, [comp_cache[chars_by_orbit]], key))
    entries.sort(key=lambda e: repr(e.label))
    return ActionData(order, n * d, entries)


def _sym_component(x_model: RingModel, chars_by_orbit, d: int) -> FixedComponent:
    k = len(chars_by_orbit)
    ring = product_model(*([x_model] * k)) if k > 1 else x_model
    factors, bundles = [], []
    if d == 0:
        return FixedComponent(ring, [])
    for w, chars in enumerate(chars_by_orbit):
        fb = [EigenBundle(lg, lh, d, list(x_model.tangent_chern)) for lg, lh in chars]
        factors.append(FixedComponent(x_model, fb))
        for lg, lh in chars:
            pulled = [ring.factor_embedding(w, c) for c in x_model.tangent_chern] if k > 1 else list(
                x_model.tangent_chern
            )
            bundles.append(EigenBundle(lg, lh, d, pulled))
    return FixedComponent(ring, bundles, factors if k > 1 else None)


# ---------------------------------------------------------------- conjecture harness


@dataclass
class CompareReport:
    passed: bool
    q_order: object
    first_mismatch: dict | None
    lhs: GenusResult | None = None
    rhs: GenusResult | None = None

    def to_json(self) -> dict:
        return {
            "pass": self.passed,
            "orders_checked": fmt_rational(self.q_order),
            "first_mismatch": self.first_mismatch,
        }


def conjecture_compare(a: ActionData, quotient, d: int | None = None, q_order=2) -> CompareReport:
    """``Ell_orb(X, G) = norm_factor(d) * hat-genus(X/G, Delta)`` termwise."""
    ring, divisors = quotient
    if d is None:
        d = a.ambient_dim
    if d != ring.dim or d != a.ambient_dim:
        raise InvalidInput("dimension mismatch between the action and the quotient pair")
    lhs = ell_orbifold(a, q_order)
    rhs = ell_singular(ring, divisors, q_order, convention="ell")
    mm = lhs.first_mismatch(rhs)
    info = None
    if mm is not None:
        y, q, cl, cr = mm
        info = {"y": fmt_rational(y), "q": fmt_rational(q), "lhs": fmt_rational(cl), "rhs": fmt_rational(cr)}
    return CompareReport(mm is None, as_rational(q_order), info, lhs, rhs)


# ---------------------------------------------------------------- JSON


def action_from_json(data: dict, models: dict | None = None) -> ActionData:
    """Hand-entered fixed-point data.

    ``{group_order, ambient_dim, pairs: [{multiplicity, components: [{ring,
    eigenbundles: [{lambda_g, lambda_h, rank, chern: [poly, ...]}]}]}]}``;
    ``ring`` is a ring JSON object or the name of an entry in ``models``.
    """
    from .cohom import ring_from_json

    allowed = {"group_order", "ambient_dim", "pairs", "schema_version", "kind", "provenance"}
    extra = set(data) - allowed
    if extra:
        raise InvalidInput(f"unknown action fields {sorted(extra)}")
    rings: dict = {}

    def get_ring(spec):
        if isinstance(spec, str):
            if models and spec in models:
                return models[spec]
            if spec == "point":
                return rings.setdefault("point", point_model())
            raise InvalidInput(f"unknown ring reference {spec!r}")
        key = repr(sorted(spec.items()))
        if key not in rings:
            rings[key] = ring_from_json(spec)
        return rings[key]

    pairs = []
    try:
        for p in data["pairs"]:
            extra = set(p) - {"multiplicity", "components", "label"}
            if extra:
                raise InvalidInput(f"unknown pair fields {sorted(extra)}")
            comps = []
            for c in p["components"]:
                extra = set(c) - {"ring", "eigenbundles"}
                if extra:
                    raise InvalidInput(f"unknown component fields {sorted(extra)}")
                ring = get_ring(c["ring"])
                bundles = []
                for b in c["eigenbundles"]:
                    extra = set(b) - {"lambda_g", "lambda_h", "rank", "chern"}
                    if extra:
                        raise InvalidInput(f"unknown eigenbundle fields {sorted(extra)}")
                    chern = [ring.one()] + [ring.parse(t) for t in b.get("chern", [])]
                    bundles.append(EigenBundle(as_rational(b["lambda_g"]), as_rational(b["lambda_h"]), int(b["rank"]), chern))
                comps.append(FixedComponent(ring, bundles))
            pairs.append(PairEntry(int(p.get("multiplicity", 1)), comps, p.get("label")))
        return ActionData(int(data["group_order"]), int(data["ambient_dim"]), pairs)
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, InvalidInput):
            raise
        raise InvalidInput(f"malformed action JSON: {exc}") from exc


# ---------------------------------------------------------------- built-in actions


def elliptic_involution_data() -> ActionData:
    """``z -> -z`` on an elliptic curve: four fixed points for each nontrivial pair."""
    from .cohom import curve_ring

    E = curve_ring(1)
    pt = point_model()
    half = Q(1, 2)
    pairs = [PairEntry(1, [FixedComponent(E, [EigenBundle(ZERO, ZERO, 1, list(E.tangent_chern))])], ("e", "e"))]
    for label, lam in ((("e", "s"), (ZERO, half)), (("s", "e"), (half, ZERO)), (("s", "s"), (half, half))):
        comp = FixedComponent(pt, [EigenBundle(lam[0], lam[1], 1, [pt.one()])])
        pairs.append(PairEntry(1, [comp] * 4, label))
    return ActionData(2, 1, pairs)


def elliptic_involution_quotient(points: int = 4):
    """``(P^1, sum 1/2 p_i)``: the quotient pair, as ``(ring, divisors)``."""
    from .cohom import projective_space
    from .genuscore import DivisorDatum

    P1 = projective_space(1)
    h = P1.gen("h")
    return P1, [DivisorDatum(h, Q(-1, 2)) for _ in range(points)]
