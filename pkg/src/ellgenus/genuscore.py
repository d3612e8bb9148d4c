"""Theta-quotient calculus and the non-orbifold genus evaluations.

Reduced theta function
----------------------
Everything is expressed through

    th(w) = (w^(1/2) - w^(-1/2)) * prod_{k>=1} (1 - q^k w)(1 - q^k / w).

With ``y = e^(2 pi i z)`` the Jacobi theta function factors as
``theta(z) = -i C th(y)`` where ``C = q^(1/8) prod_l (1 - q^l)``, and
``theta'(0) = 2 pi C prod_k (1 - q^k)^2``.  Hence every ratio of thetas
with the same number of factors upstairs and downstairs becomes a ratio
of ``th`` values, and each ``theta'(0)`` contributes ``E2 := prod (1-q^k)^2``
times ``2 pi`` which cancels against a ``2 pi i`` elsewhere.  In particular

    2 pi i theta(-z) / theta'(0) = th(y^-1) / E2
                                 = y^(-1/2) (1 - y) prod (1 - y q^k)(1 - q^k / y) / (1 - q^k)^2.

Per-root factors (``x`` a Chern root, ``e^x`` its exponential):

* ``ell``:  ``f(x) = x th(e^x / y) / th(e^x)``; ``f(0) = th(1/y) / E2``.
* ``hat``:  ``h(x) = f(x) / f(0)``, so ``h(0) = 1``.

The two conventions differ by ``norm_factor(d) = (th(1/y) / E2)^d``.

Divisor factor for a discrepancy ``alpha`` with ``b = alpha + 1``:
``th(e^e y^-b) th(y^-1) / (th(e^e y^-1) th(y^-b))``.

Jets
----
``th(e^x w)`` is expanded in the nilpotent ``x``.  Writing
``th(W) = sum_a k_a(q) W^a`` with a formal ``W``, the coefficient of ``x^j``
is ``T_j(w) = sum_a a^j / j! k_a w^a``.  Substituting ``w = zeta y^b q^c``
with ``|c| < 1`` is exact below ``q^P`` once the ``W``-expansion reaches
q-order ``(P + |c|/2) / (1 - |c|)``, because ``|a| <= e + 1/2`` for the
``q^e`` part.

Constants ``th(w)`` with ``w`` free of ``q`` and not a root of unity are not
units among series; they factor as ``B_b * (unit)`` and are handled by
:class:`~ellgenus.qyseries.YFrac`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .cohom import (
    ChernNumberModel,
    RingElement,
    RingModel,
    chern_monomial,
    monomial_in_elementary,
    multiplicative_terms,
    partitions,
)
from .errors import InvalidInput, TruncationError
from .exactnum import ONE, ZERO, Q, as_rational, cap_cached, cyc_to_rational, fmt_rational, root_of_unity
from .qyseries import INF, PhaseQ, Series, ShiftY, YFrac, series_substitute

# ---------------------------------------------------------------- theta expansions


@cap_cached(None)
def _theta_formal(E: int) -> Series:
    """``th(W)`` with ``W`` stored in the y-slot, exact below ``q^E``."""
    half = Q(1, 2)
    s = Series.from_terms({(half, 0): ONE, (-half, 0): -ONE}, q_order=E, D=2)
    for k in range(1, E):
        s = s * Series.from_terms({(0, 0): ONE, (1, k): -ONE}, D=2)
        s = s * Series.from_terms({(0, 0): ONE, (-1, k): -ONE}, D=2)
    return s


@cap_cached(None)
def _e2(prec_q) -> Series:
    """``prod_{k>=1} (1 - q^k)^2`` below ``q^prec_q``."""
    s = Series.one(q_order=prec_q)
    for k in range(1, math.ceil(prec_q)):
        f = Series.from_terms({(0, 0): ONE, (0, k): -ONE})
        s = s * f * f
    return s


@dataclass(frozen=True)
class Mono:
    """The monomial ``exp(2 pi i phase) * y^y * q^q``."""

    y: object = 0
    q: object = 0
    phase: object = 0

    def __post_init__(self):
        object.__setattr__(self, "y", as_rational(self.y))
        object.__setattr__(self, "q", as_rational(self.q))
        object.__setattr__(self, "phase", as_rational(self.phase))


@cap_cached(4096)
def theta_jets(w: Mono, n: int, prec_q) -> tuple[Series, ...]:
    """``(T_0(w), ..., T_n(w))`` known below ``q^prec_q``.

    ``w^(1/2)`` is taken as ``exp(pi i phase) y^(y/2) q^(q/2)``; any theta
    ratio uses the same choice upstairs and downstairs.
    """
    c = abs(w.q)
    if c >= 1:
        raise InvalidInput("theta jets need |q-exponent of w| < 1")
    prec_q = as_rational(prec_q)
    E = max(1, math.ceil((prec_q + c / 2) / (1 - c)))
    base = _theta_formal(E)
    D = math.lcm(base.D, w.y.denominator * 2, w.q.denominator * 2, prec_q.denominator)
    outs = [dict() for _ in range(n + 1)]
    fact = [math.factorial(j) for j in range(n + 1)]
    for a, e, k in base.terms():
        qe = e + a * w.q
        if qe >= prec_q:
            continue
        coeff = k
        if w.phase:
            coeff = coeff * root_of_unity(w.phase * a)
        key = (a * w.y, qe)
        ap = ONE
        for j in range(n + 1):
            if j:
                ap = ap * a
            if not ap and j:
                break
            v = coeff * ap / fact[j] if j else coeff
            d = outs[j]
            d[key] = d[key] + v if key in d else v
    return tuple(Series.from_terms(o, q_order=prec_q, D=D) for o in outs)


def theta_red(w, q_order) -> Series:
    """``th(w)`` for a monomial ``w`` (see :class:`Mono`) truncated at ``q_order``."""
    if not isinstance(w, Mono):
        w = Mono(*w) if isinstance(w, tuple) else Mono(y=w)
    return theta_jets(w, 0, as_rational(q_order))[0]


def theta_red_nilpotent(w, x: RingElement, q_order) -> Series:
    """``th(w e^x)`` as a ring-valued series for a nilpotent class ``x``."""
    if not isinstance(w, Mono):
        w = Mono(*w) if isinstance(w, tuple) else Mono(y=w)
    if not x.is_nilpotent():
        raise InvalidInput("class is not nilpotent")
    return jet_to_ring_series(list(theta_jets(w, x.model.dim, as_rational(q_order))), x)


@cap_cached(1024)
def _theta_qfree_inverse(b, prec_q) -> YFrac:
    """``1 / th(y^b)`` for ``b != 0`` as a localized fraction."""
    b = as_rational(b)
    if b == 0:
        raise InvalidInput("th(1) = 0 is not invertible")
    unit = Series.one(q_order=prec_q, D=b.denominator)
    for k in range(1, math.ceil(prec_q)):
        unit = unit * Series.from_terms({(0, 0): ONE, (b, k): -ONE})
        unit = unit * Series.from_terms({(0, 0): ONE, (-b, k): -ONE})
    # th(y^b) = (y^(b/2) - y^(-b/2)) * unit = B_{-b} * unit
    return YFrac.inv_binomial(-b) * unit.inverse()


# ---------------------------------------------------------------- jets


class Jet:
    """Truncated power series ``sum_j c_j x^j`` (``j <= n``) over series-like coefficients."""

    __slots__ = ("c",)

    def __init__(self, coeffs):
        self.c = list(coeffs)

    @property
    def n(self) -> int:
        return len(self.c) - 1

    def __mul__(self, other):
        if not isinstance(other, Jet):
            return Jet([a * other for a in self.c])
        n = min(self.n, other.n)
        out = []
        for k in range(n + 1):
            acc = None
            for j in range(k + 1):
                a, b = self.c[j], other.c[k - j]
                if not a or not b:
                    continue
                t = a * b
                acc = t if acc is None else acc + t
            out.append(acc if acc is not None else Series.zero())
        return Jet(out)

    def inverse(self) -> "Jet":
        c0 = self.c[0]
        inv0 = c0.inverse()
        out = [inv0]
        for k in range(1, self.n + 1):
            acc = None
            for j in range(1, k + 1):
                a = self.c[j]
                if not a or not out[k - j]:
                    continue
                t = a * out[k - j]
                acc = t if acc is None else acc + t
            out.append(-(acc * inv0) if acc is not None else Series.zero())
        return Jet(out)

    def inverse_with(self, inv0) -> "Jet":
        """Inverse given ``1/c_0`` explicitly (e.g. as a :class:`YFrac`)."""
        out = [inv0]
        for k in range(1, self.n + 1):
            acc = None
            for j in range(1, k + 1):
                a = self.c[j]
                if not a or not out[k - j]:
                    continue
                t = a * out[k - j]
                acc = t if acc is None else acc + t
            out.append(-(acc * inv0) if acc is not None else Series.zero())
        return Jet(out)


def jet_to_ring_series(coeffs: list, x: RingElement) -> Series:
    """``sum_j coeffs[j] x^j`` as a series with ring-element coefficients."""
    model = x.model
    out = None
    xp = model.one()
    for j, cj in enumerate(coeffs):
        if j:
            xp = xp * x
        if not xp:
            break
        if isinstance(cj, YFrac):
            cj = cj.to_series()
        term = cj.map_coeffs(lambda v, xp=xp: xp.scale(v))
        out = term if out is None else out + term
    return out


# ---------------------------------------------------------------- per-root factors


def _prec(q_order):
    return as_rational(q_order)


def _e2_inverse(P) -> Series:
    return _e2(P).inverse()


@cap_cached(256)
def _x_over_theta(n: int, P) -> Jet:
    """``x / th(e^x)`` as a jet; ``th(e^x) / x = sum_j T_{j+1}(1) x^j``."""
    T = theta_jets(Mono(), n + 1, P)
    return Jet(T[1:]).inverse()


@cap_cached(256)
def ell_root_jet(n: int, P) -> Jet:
    """``f(x) = x th(e^x / y) / th(e^x)`` up to ``x^n``."""
    T = theta_jets(Mono(y=-1), n, P)
    return Jet(T) * _x_over_theta(n, P)


@cap_cached(256)
def hat_root_jet(n: int, P, a=ONE) -> Jet:
    """``h_a(x) = x E2 th(e^x y^-a) / (th(y^-a) th(e^x))``; ``h_a(0) = 1``."""
    T = theta_jets(Mono(y=-as_rational(a)), n, P)
    scal = _theta_qfree_inverse(-as_rational(a), P) * _e2(P)
    return Jet([scal * t for t in T]) * _x_over_theta(n, P)


@cap_cached(256)
def divisor_jet(n: int, P, alpha) -> Jet:
    """``th(e^e y^-b) th(y^-1) / (th(e^e y^-1) th(y^-b))`` with ``b = alpha + 1``."""
    alpha = as_rational(alpha)
    if alpha == -1:
        raise InvalidInput(
            "discrepancy -1 is not supported: that case needs the ample-divisor limit construction"
        )
    if alpha == 0:
        return Jet([Series.one()] + [Series.zero()] * n)
    b = alpha + 1
    num = theta_jets(Mono(y=-b), n, P)
    den = theta_jets(Mono(y=-1), n, P)
    t0 = YFrac.lift(den[0])
    # 1 / th(e^e y^-1) = (1 / th(y^-1)) / (1 + sum_{j>=1} T_j / th(y^-1) e^j)
    inv_den = Jet(den).inverse_with(_theta_qfree_inverse(-ONE, P))
    top = Jet([_theta_qfree_inverse(-b, P) * t for t in num])
    return Jet([c * t0 for c in (top * inv_den).c])


def root_factor(x: RingElement, q_order, convention: str = "ell") -> Series:
    """Per-root factor as a ring-valued series (``f`` or ``h`` above)."""
    if not x.is_nilpotent():
        raise InvalidInput("root_factor needs a nilpotent class")
    P = _prec(q_order)
    n = x.model.dim
    jet = ell_root_jet(n, P) if convention == "ell" else hat_root_jet(n, P)
    return jet_to_ring_series(jet.c, x)


# ---------------------------------------------------------------- normalization


@cap_cached(256)
def _norm1(P) -> Series:
    return theta_red(Mono(y=-1), P) * _e2(P).inverse()


def norm_factor(d: int, q_order) -> Series:
    """``(th(1/y) / E2)^d = (y^(-1/2) G(y, q))^d``."""
    P = _prec(q_order)
    if d == 0:
        return Series.one(q_order=P)
    return _norm1(P) ** int(d)


def norm_factor_inverse(d: int, q_order) -> YFrac:
    P = _prec(q_order)
    if d == 0:
        return YFrac.lift(Series.one(q_order=P))
    inv = _theta_qfree_inverse(-ONE, P) * _e2(P)
    out = inv
    for _ in range(int(d) - 1):
        out = out * inv
    return out


# ---------------------------------------------------------------- results


@dataclass
class GenusResult:
    """A genus as ``series / prod_b B_b^{n_b}`` (empty ``den`` for series).

    ``convention`` is ``"ell"`` (includes ``y^(-d/2)``, q^0 row is
    ``y^(-d/2) chi_{-y}``) or ``"hat"`` (per-root factor equal to 1 at 0).
    """

    series: Series
    dim: int
    convention: str = "ell"
    q_order: object = None
    den: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.q_order is None:
            self.q_order = self.series.q_order
        self.q_order = as_rational(self.q_order) if self.q_order is not None else None

    @property
    def D(self) -> int:
        return self.series.D

    def is_series(self) -> bool:
        return not self.den

    def as_yfrac(self) -> YFrac:
        return YFrac(self.series, self.den)

    def coeff(self, y, q):
        return self.series.coeff(y, q)

    def to_convention(self, convention: str) -> "GenusResult":
        if convention == self.convention:
            return self
        P = self.q_order
        if convention == "ell":
            val = self.as_yfrac() * norm_factor(self.dim, P)
        elif convention == "hat":
            val = self.as_yfrac() * norm_factor_inverse(self.dim, P)
        else:
            raise InvalidInput(f"unknown convention {convention!r}")
        return make_result(val, self.dim, convention, P)

    def q0_row(self) -> dict:
        return self.series.q_row(0)

    def euler_number(self):
        """Value of the q^0 row at ``y = 1`` (requires the ell convention)."""
        if self.den:
            raise InvalidInput("Euler specialization needs a Laurent polynomial q^0 row")
        tot = ZERO
        for c in self.series.q_row(0).values():
            tot += c
        return tot

    def equals(self, other: "GenusResult") -> bool:
        return self.first_mismatch(other) is None

    def first_mismatch(self, other: "GenusResult"):
        if self.convention != other.convention:
            other = other.to_convention(self.convention)
        a, b = self.as_yfrac(), other.as_yfrac()
        den = dict(a.den)
        for k, v in b.den.items():
            den[k] = max(den.get(k, 0), v)
        return a._expand_to(den).first_mismatch(b._expand_to(den))

    def to_json(self) -> dict:
        return {
            "kind": "genus",
            "convention": self.convention,
            "dim": self.dim,
            "Q": None if self.q_order is None else fmt_rational(self.q_order),
            "D": self.series.D,
            "series": self.series.to_json(),
            "denominators": {fmt_rational(k): v for k, v in sorted(self.den.items())},
        }

    @classmethod
    def from_json(cls, data: dict) -> "GenusResult":
        extra = set(data) - {"kind", "convention", "dim", "Q", "D", "series", "denominators", "schema_version"}
        if extra:
            raise InvalidInput(f"unknown genus fields {sorted(extra)}")
        try:
            s = Series.from_json(data["series"])
            den = {as_rational(k): int(v) for k, v in data.get("denominators", {}).items()}
            return cls(s, int(data["dim"]), data["convention"], data.get("Q"), den)
        except (KeyError, TypeError) as exc:
            raise InvalidInput(f"malformed genus JSON: {exc}") from exc

    def __eq__(self, other):
        if not isinstance(other, GenusResult):
            return NotImplemented
        return (
            self.convention == other.convention
            and self.dim == other.dim
            and self.q_order == other.q_order
            and self.den == other.den
            and self.series.D == other.series.D
            and self.series.prec == other.series.prec
            and list(self.series.terms()) == list(other.series.terms())
        )


def make_result(value, dim: int, convention: str, q_order) -> GenusResult:
    """Reduce, rationalize and truncate a computed value into a result."""
    P = as_rational(q_order)
    y = YFrac.lift(value).reduce()
    num = y.num
    if num.prec != INF and num.prec < P * num.D:
        raise TruncationError(
            f"computed only to q^{fmt_rational(num.q_order)}, requested q^{fmt_rational(P)}"
        )
    num = num.truncate(P).to_rational()
    if num.rows and min(num.rows) < 0:
        raise InvalidInput("genus has negative q-support; input data is inconsistent")
    D = num.D
    # shrink the exponent denominator to what the terms need
    g = 0
    for qe, row in num.rows.items():
        g = math.gcd(g, qe)
        for ye in row:
            g = math.gcd(g, ye)
    g = math.gcd(g, int(P * D)) if P * D == int(P * D) else 1
    if g > 1 and D % g == 0:
        rows = {qe // g: {ye // g: c for ye, c in row.items()} for qe, row in num.rows.items()}
        num = Series(rows, D // g, num.prec // g if num.prec != INF else INF, clean=False)
    return GenusResult(num, dim, convention, P, dict(y.den))


# ---------------------------------------------------------------- integrals


def _ring_mul(model: RingModel, a: dict, b: dict) -> dict:
    """Product in ``R (x) coefficients`` where elements are ``{basis: coeff}``."""
    out: dict = {}
    mult = model.mult
    for i, s in a.items():
        for j, t in b.items():
            entries = mult.get((i, j))
            if not entries:
                continue
            st = s * t
            for k, c in entries:
                v = st * c if c != 1 else st
                out[k] = out[k] + v if k in out else v
    return out


def _ring_integrate(model: RingModel, a: dict):
    tot = None
    for k, val in model.integrals.items():
        c = a.get(k)
        if c is None or not c:
            continue
        t = c * val if val != 1 else c
        tot = t if tot is None else tot + t
    return tot


def _class_of_bundle(model: RingModel, rank: int, classes: list, jet: Jet, *, skip_a0: bool = False) -> dict:
    """``prod_{roots} phi(root)`` for a rank-``rank`` bundle, as ``{basis: coeff}``.

    ``classes[i]`` is ``c_i`` of the bundle; ``jet`` is ``phi``.
    """
    out: dict = {}
    a = jet.c
    a0_pows: dict = {}
    for lam in multiplicative_terms(rank, model.dim):
        if any(p >= len(a) or not a[p] for p in lam):
            continue
        m = chern_monomial(model, classes, lam)
        if not m:
            continue
        e0 = rank - len(lam)
        coef = None
        if e0 and not skip_a0:
            if e0 not in a0_pows:
                a0_pows[e0] = _power(a[0], e0)
            coef = a0_pows[e0]
        for p in lam:
            coef = a[p] if coef is None else coef * a[p]
        if coef is None:
            coef = Series.one()
        for k, c in m.vec.items():
            v = coef * c
            out[k] = out[k] + v if k in out else v
    return out


def _power(x, e: int):
    out = x
    for _ in range(e - 1):
        out = out * x
    return out


def _class_of_divisor(model: RingModel, e: RingElement, jet: Jet) -> dict:
    out: dict = {}
    ep = model.one()
    for j, cj in enumerate(jet.c):
        if j:
            ep = ep * e
        if not ep:
            break
        if not cj:
            continue
        for k, c in ep.vec.items():
            v = cj * c
            out[k] = out[k] + v if k in out else v
    return out


def _genus_chern_numbers(m: ChernNumberModel, jet: Jet):
    d = m.dim
    tot = None
    a = jet.c
    for lam in partitions(d):
        val = ZERO
        for mu, c in monomial_in_elementary(lam).items():
            val += c * m.chern_number(mu)
        if not val:
            continue
        coef = _power(a[0], d - len(lam)) if d - len(lam) else None
        for p in lam:
            coef = a[p] if coef is None else coef * a[p]
        t = coef * val
        tot = t if tot is None else tot + t
    return tot


# ---------------------------------------------------------------- genera


def ell_smooth(m, q_order=4, convention: str = "ell") -> GenusResult:
    """Elliptic genus of a smooth compact model (ring or Chern numbers)."""
    P = _prec(q_order)
    d = m.dim
    if d == 0:
        return make_result(Series.one(q_order=P), 0, convention, P)
    jet = ell_root_jet(d, P) if convention == "ell" else hat_root_jet(d, P)
    if isinstance(m, ChernNumberModel):
        val = _genus_chern_numbers(m, jet)
    elif isinstance(m, RingModel):
        cls = _class_of_bundle(m, d, m.tangent_chern, jet)
        val = _ring_integrate(m, cls)
    else:
        raise InvalidInput(f"unsupported model {type(m).__name__}")
    if val is None:
        val = Series.zero(q_order=P)
    return make_result(val, d, convention, P)


@dataclass(frozen=True)
class DivisorDatum:
    e: RingElement
    alpha: object

    def __post_init__(self):
        object.__setattr__(self, "alpha", as_rational(self.alpha))
        if self.alpha == -1:
            raise InvalidInput(
                "discrepancy -1 is not supported: that case needs the ample-divisor limit construction"
            )
        if any(self.e.model.degrees[k] != 1 for k in self.e.vec):
            raise InvalidInput("divisor class must be homogeneous of degree 1")


def _as_divisors(divisors) -> list[DivisorDatum]:
    out = []
    for d in divisors:
        if isinstance(d, DivisorDatum):
            out.append(d)
        else:
            e, a = d
            out.append(DivisorDatum(e, a))
    return out


def _singular_integrand(Y: RingModel, divisors: list[DivisorDatum], P) -> dict:
    d = Y.dim
    cls = _class_of_bundle(Y, d, Y.tangent_chern, hat_root_jet(d, P))
    for dv in divisors:
        if dv.alpha == 0:
            continue
        cls = _ring_mul(Y, cls, _class_of_divisor(Y, dv.e, divisor_jet(d, P, dv.alpha)))
    return cls


def ell_singular(Y: RingModel, divisors=(), q_order=4, convention: str = "ell") -> GenusResult:
    """Singular elliptic genus from a resolution ``Y`` and its divisors.

    Computed as ``int_Y prod h(y_l) prod_k DF_{alpha_k}(e_k)`` (``hat``) and
    converted to ``ell`` by ``norm_factor(dim)`` unless asked otherwise.
    """
    if not isinstance(Y, RingModel):
        raise InvalidInput("the singular genus needs a ring model (divisor classes must multiply)")
    P = _prec(q_order)
    divs = _as_divisors(divisors)
    for dv in divs:
        if dv.e.model is not Y:
            raise InvalidInput("divisor class does not belong to the resolution's ring")
    if Y.dim == 0:
        return make_result(Series.one(q_order=P), 0, convention, P)
    val = _ring_integrate(Y, _singular_integrand(Y, divs, P))
    if val is None:
        val = Series.zero(q_order=P)
    val = YFrac.lift(val)
    if convention == "ell":
        val = val * norm_factor(Y.dim, P)
    elif convention != "hat":
        raise InvalidInput(f"unknown convention {convention!r}")
    return make_result(val, Y.dim, convention, P)


# ---------------------------------------------------------------- stringy chi_y


@cap_cached(64)
def _todd_jet(n: int) -> tuple:
    """Coefficients of ``x / (1 - e^-x)``."""
    base = [Q((-1) ** k, math.factorial(k + 1)) for k in range(n + 1)]
    out = [ONE]
    for k in range(1, n + 1):
        acc = ZERO
        for j in range(1, k + 1):
            acc += base[j] * out[k - j]
        out.append(-acc)
    return tuple(out)


def _u_poly(terms: dict) -> Series:
    return Series.from_terms({(k, 0): as_rational(v) for k, v in terms.items()})


def stringy_chi_y(Y: RingModel, divisors=(), u_order=None) -> Series:
    """``E_st(u)`` via the integral over the resolution (``u`` stored as ``y``).

    Factors: ``(1 - u e^-x) x / (1 - e^-x)`` per Chern root and
    ``(u - 1)(1 - u^b e^-e) / ((u^b - 1)(1 - u e^-e))`` per divisor, ``b = alpha + 1``.
    """
    d = Y.dim
    divs = _as_divisors(divisors)
    fact = [math.factorial(k) for k in range(d + 1)]
    todd = _todd_jet(d)
    # (1 - u e^-x) = (1 - u) + u sum_{k>=1} -(-x)^k/k!
    lin = [_u_poly({0: 1, 1: -1})] + [_u_poly({1: -Q((-1) ** k, fact[k])}) for k in range(1, d + 1)]
    root = Jet(lin) * Jet([_u_poly({0: t}) for t in todd])
    cls = _class_of_bundle(Y, d, Y.tangent_chern, root)
    for dv in divs:
        if dv.alpha == 0:
            continue
        b = dv.alpha + 1
        num = [_u_poly({0: 1, b: -1})] + [_u_poly({b: Q((-1) ** (k + 1), fact[k])}) for k in range(1, d + 1)]
        den = [_u_poly({0: 1, 1: -1})] + [_u_poly({1: Q((-1) ** (k + 1), fact[k])}) for k in range(1, d + 1)]
        # 1/(1 - u) = u^(-1/2) / B_1 ; (u - 1)/(u^b - 1) = u^(1/2 - b/2) B_1 / B_b
        inv_den = Jet(den).inverse_with(YFrac.inv_binomial(1) * _u_poly({Q(-1, 2): 1}))
        pref = YFrac.inv_binomial(b) * _u_poly({-b / 2: 1, 1 - b / 2: -1})
        jet = Jet([c * pref for c in (Jet(num) * inv_den).c])
        cls = _ring_mul(Y, cls, _class_of_divisor(Y, dv.e, jet))
    val = _ring_integrate(Y, cls)
    if val is None:
        return Series.zero()
    return YFrac.lift(val).to_series().to_rational()


# ---------------------------------------------------------------- Jacobi shifts


@dataclass
class ShiftReport:
    passed: bool
    checked: int
    law: str
    first_failure: dict | None = None

    def to_json(self) -> dict:
        return {"pass": self.passed, "checked": self.checked, "law": self.law, "first_failure": self.first_failure}


def jacobi_shift_check(g: GenusResult, index_two_m: int, steps: int = 1) -> list[ShiftReport]:
    """Check ``z -> z + n tau``, ``z -> z + 1`` and ``tau -> tau + 1`` termwise.

    The elliptic law for index ``r = index_two_m / 2``:
    ``phi(z + n tau) = (-1)^(2 r n) q^(-r n^2) y^(-2 r n) phi(z)``, i.e.
    ``c(M - n L, L) = (-1)^(2 r n) c(M + r n^2, L + 2 r n)``.  A target is
    compared only when both source orders are below the truncation (or
    negative, hence zero).
    """
    if not g.is_series():
        raise InvalidInput("shift laws are checked on the ell convention (a Laurent series)")
    s = g.series
    Qo = g.q_order
    r = Q(index_two_m, 2)
    n = int(steps)
    reports = []

    def known(m):
        return m < Qo

    def c_at(m, l):
        if m < 0:
            return ZERO
        return s.coeff(l, m)

    sign = -ONE if (2 * r * n) % 2 else ONE
    targets = set()
    for l, m, _ in s.terms():
        targets.add((m + n * l, l))
        targets.add((m - r * n * n, l - 2 * r * n))
    checked = 0
    failure = None
    for M, L in sorted(targets):
        m1, m2 = M - n * L, M + r * n * n
        if not (known(m1) and known(m2)):
            continue
        checked += 1
        lhs, rhs = c_at(m1, L), sign * c_at(m2, L + 2 * r * n)
        if lhs != rhs:
            failure = {"q": fmt_rational(M), "y": fmt_rational(L), "lhs": fmt_rational(lhs), "rhs": fmt_rational(rhs)}
            break
    reports.append(ShiftReport(failure is None, checked, f"z -> z + {n} tau", failure))

    # z -> z + 1: y^l -> exp(2 pi i l) y^l, law factor (-1)^(2r)
    shifted = series_substitute(s, ShiftY(0, 1))
    expect = s.scale(-ONE if (2 * r) % 2 else ONE)
    mm = shifted.first_mismatch(expect)
    reports.append(ShiftReport(mm is None, s.num_terms(), "z -> z + 1", _mm_json(mm)))

    # tau -> tau + 1
    shifted = series_substitute(s, PhaseQ(1))
    mm = shifted.first_mismatch(s)
    reports.append(ShiftReport(mm is None, s.num_terms(), "tau -> tau + 1", _mm_json(mm)))
    return reports


def _mm_json(mm):
    if mm is None:
        return None
    y, q, a, b = mm
    return {"y": fmt_rational(y), "q": fmt_rational(q), "lhs": repr(a), "rhs": repr(b)}


def theta_quasi_period_check(w: Mono, q_order) -> tuple | None:
    """First mismatch of ``th(q w) = -w^-1 q^(-1/2) th(w)``, or ``None``.

    Both sides are expanded independently; ``q w`` must keep ``|q-exp| < 1``
    so the left side is computed directly, otherwise via the formal product.
    """
    P = as_rational(q_order)
    lhs = _theta_direct(Mono(w.y, w.q + 1, w.phase), P)
    rhs = _theta_direct(w, P + 2).mul_monomial(-root_of_unity(-w.phase), -w.y, -w.q - Q(1, 2))
    return lhs.first_mismatch(rhs, q_order=P - 1)


def _theta_direct(w: Mono, P) -> Series:
    """``th(w)`` by multiplying out the product (no jet machinery)."""
    half = root_of_unity(w.phase / 2)
    s = Series.from_terms({(w.y / 2, w.q / 2): ONE}).scale(half) - Series.from_terms(
        {(-w.y / 2, -w.q / 2): ONE}
    ).scale(root_of_unity(-w.phase / 2))
    z, zi = root_of_unity(w.phase), root_of_unity(-w.phase)
    K = math.ceil(P + abs(w.q) + 2) + 2
    for k in range(1, K):
        s = s * (Series.one() - Series.from_terms({(w.y, k + w.q): ONE}).scale(z))
        s = s * (Series.one() - Series.from_terms({(-w.y, k - w.q): ONE}).scale(zi))
        s = s.truncate(P + 4)
    return s.truncate(P)


# ---------------------------------------------------------------- CY hypersurfaces


def cy_hypersurface_integral(ring: RingModel, ray_degrees: list, q_order) -> YFrac:
    """``int_P prod_j h_{a_j}(x_j) * K(sum_j a_j x_j)`` over a smooth toric ``P``.

    ``ray_degrees[j]`` is ``deg_1`` on ray ``j`` (generator ``x{j}`` order);
    ``K(s) = th(e^s) th(y^-1) / (th(e^s y^-1) E2)``.
    """
    P = _prec(q_order)
    d = ring.dim
    gens = [ring.gen(n) for n in ring.names]
    if len(gens) != len(ray_degrees):
        raise InvalidInput("one degree per ray generator is needed")
    cls = {ring.index[tuple([0] * len(gens))]: Series.one()}
    for x, a in zip(gens, ray_degrees):
        a = as_rational(a)
        if a <= 0:
            raise InvalidInput("ray degrees must be positive")
        cls = _ring_mul(ring, cls, _class_of_divisor(ring, x, hat_root_jet(d, P, a)))
    s_class = ring.zero()
    for x, a in zip(gens, ray_degrees):
        s_class = s_class + x.scale(a)
    cls = _ring_mul(ring, cls, _class_of_divisor(ring, s_class, _k_jet(d, P)))
    val = _ring_integrate(ring, cls)
    return YFrac.lift(val if val is not None else Series.zero(q_order=P))


@cap_cached(64)
def _k_jet(n: int, P) -> Jet:
    num = theta_jets(Mono(), n, P)
    den = theta_jets(Mono(y=-1), n, P)
    inv_den = Jet(den).inverse_with(_theta_qfree_inverse(-ONE, P))
    t0 = YFrac.lift(den[0])
    e2i = _e2(P).inverse()
    return Jet([c * t0 * e2i for c in (Jet(num) * inv_den).c])


def cy_hypersurface(coarse, fine=None, q_order=4, convention: str = "ell") -> GenusResult:
    """Singular genus of the anticanonical hypersurface of a toric ambient.

    ``fine`` is a smooth refinement of ``coarse`` (defaults to ``coarse``);
    every fine ray ``n`` enters through ``deg_1(n)``, the PL function equal
    to 1 on the coarse rays.
    """
    from .toricgeo import stanley_reisner, unit_deg

    if fine is None:
        fine = coarse
    if coarse.rank < 2:
        raise InvalidInput("the ambient must have dimension at least 2")
    deg = unit_deg(coarse)
    ray_degrees = [deg.evaluate(coarse, r) for r in fine.rays]
    ring = stanley_reisner(fine)
    d = coarse.rank - 1
    val = cy_hypersurface_integral(ring, ray_degrees, q_order)
    if convention == "ell":
        val = val * norm_factor(d, _prec(q_order))
    elif convention != "hat":
        raise InvalidInput(f"unknown convention {convention!r}")
    return make_result(val, d, convention, q_order)
