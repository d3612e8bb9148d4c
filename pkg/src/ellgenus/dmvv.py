"""Both sides of the symmetric-product generating-function identity.

Left side: ``sum_n p^n Ell_orb(X^n, S_n)`` from commuting-pair fixed-point
data.  Right side: ``prod_{i>=1} prod_{m,l} (1 - p^i y^l q^m)^(-c(mi, l))``
where ``Ell(X) = sum c(m, l) y^l q^m``.  The two routes share nothing but
the smooth genus of ``X``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .cohom import RingModel
from .errors import InvalidInput, TruncationError, UnsupportedScale
from .exactnum import ONE, ZERO, Q, as_rational, fmt_rational
from .genuscore import GenusResult, ell_smooth
from .orbifold import ell_orbifold, orbifold_euler, symmetric_product_data
from .qyseries import INF, PhaseQ, Series, series_substitute

# ---------------------------------------------------------------- coefficient tables


@dataclass
class CoeffTable:
    """``c(m, l)`` of a genus, known for every ``m < q_order``."""

    entries: dict
    dim: int
    q_order: object

    def __post_init__(self):
        self.entries = {(as_rational(m), as_rational(l)): c for (m, l), c in self.entries.items()}
        if self.q_order is not None:
            self.q_order = as_rational(self.q_order)

    @classmethod
    def from_result(cls, g: GenusResult) -> "CoeffTable":
        if not g.is_series():
            raise InvalidInput("coefficient tables need a genus without y-denominators")
        if g.convention != "ell":
            g = g.to_convention("ell")
        entries = {(q, y): c for y, q, c in g.series.terms()}
        return cls(entries, g.dim, g.q_order)

    @classmethod
    def from_series(cls, s: Series, dim: int = 0) -> "CoeffTable":
        return cls({(q, y): c for y, q, c in s.terms()}, dim, s.q_order)

    def c(self, m, l):
        return self.entries.get((as_rational(m), as_rational(l)), ZERO)

    def to_series(self) -> Series:
        return Series.from_terms({(l, m): c for (m, l), c in self.entries.items()}, q_order=self.q_order)

    def _require(self, depth) -> None:
        if self.q_order is not None and as_rational(depth) > self.q_order:
            raise TruncationError(
                f"table known below q^{fmt_rational(self.q_order)}, needed below q^{fmt_rational(depth)}"
            )


def hecke_component(c: CoeffTable, i: int, q_order=None) -> Series:
    """``sum_{m,l} c(mi, l) y^l q^m`` by exponent filtering."""
    if i < 1:
        raise InvalidInput("i must be positive")
    qo = as_rational(q_order) if q_order is not None else c.q_order / i
    c._require(i * qo)
    terms = {}
    for (m, l), v in c.entries.items():
        mm = m / i
        if mm.denominator == 1 and mm < qo:
            terms[(l, mm)] = v
    return Series.from_terms(terms, q_order=qo)


def hecke_component_average(c: CoeffTable, i: int, q_order=None) -> Series:
    """The same component as ``1/i sum_r Ell(y, q^(1/i) xi^r)``, ``xi = exp(2 pi i / i)``."""
    if i < 1:
        raise InvalidInput("i must be positive")
    qo = as_rational(q_order) if q_order is not None else c.q_order / i
    c._require(i * qo)
    stretched = Series.from_terms(
        {(l, m / i): v for (m, l), v in c.entries.items() if m < i * qo}, q_order=qo
    )
    tot = None
    for r in range(i):
        s = series_substitute(stretched, PhaseQ(r))
        tot = s if tot is None else tot + s
    return tot.scale(Q(1, i)).to_rational()


# ---------------------------------------------------------------- p-graded series


class TriSeries:
    """``sum_{n <= P} p^n s_n`` with ``s_n`` a truncated (y, q)-series."""

    def __init__(self, coeffs: list, q_order):
        self.q_order = as_rational(q_order)
        self.coeffs = [c.truncate(self.q_order) for c in coeffs]

    @property
    def p_order(self) -> int:
        return len(self.coeffs) - 1

    @classmethod
    def one(cls, P: int, q_order) -> "TriSeries":
        return cls([Series.one(q_order)] + [Series.zero(q_order) for _ in range(P)], q_order)

    def coeff(self, n: int) -> Series:
        return self.coeffs[n]

    def __mul__(self, other: "TriSeries") -> "TriSeries":
        P = min(self.p_order, other.p_order)
        out = []
        for n in range(P + 1):
            acc = Series.zero(self.q_order)
            for k in range(n + 1):
                a, b = self.coeffs[k], other.coeffs[n - k]
                if a and b:
                    acc = acc + a * b
            out.append(acc)
        return TriSeries(out, min(self.q_order, other.q_order))

    def first_mismatch(self, other: "TriSeries"):
        for n in range(min(self.p_order, other.p_order) + 1):
            mm = self.coeffs[n].first_mismatch(other.coeffs[n], min(self.q_order, other.q_order))
            if mm is not None:
                return (n,) + tuple(mm)
        return None

    def to_json(self) -> dict:
        return {"p_order": self.p_order, "coefficients": [c.to_json() for c in self.coeffs]}


def _gen_binomial(a: int, k: int):
    """``binomial(a, k)`` for any integer ``a``."""
    num = 1
    for j in range(k):
        num *= a - j
    return Q(num, math.factorial(k))


def _power_factor(d, step: int, mono_y, mono_q, P: int, q_order) -> TriSeries:
    """``(1 - p^step y^l q^m)^(-d)`` via the generalized binomial series."""
    d = as_rational(d)
    if d.denominator != 1:
        raise InvalidInput("exponents of the product must be integers")
    d = int(d)
    coeffs = [Series.zero(q_order) for _ in range(P + 1)]
    coeffs[0] = Series.one(q_order)
    k = 1
    while k * step <= P and (k * mono_q < q_order):
        b = _gen_binomial(d + k - 1, k)
        if b:
            coeffs[k * step] = Series.monomial(b, k * mono_y, k * mono_q, q_order=q_order)
        k += 1
    return TriSeries(coeffs, q_order)


def sym_generating(d_table: dict, P: int, q_order) -> TriSeries:
    """``prod_{m,l} (1 - p q^m y^l)^(-d(m,l))`` through ``p^P``, ``q^Q``."""
    qo = as_rational(q_order)
    out = TriSeries.one(P, qo)
    for (m, l), d in sorted(d_table.items()):
        m = as_rational(m)
        if d and m < qo:
            out = out * _power_factor(d, 1, as_rational(l), m, P, qo)
    return out


def dmvv_rhs(c: CoeffTable, P: int, q_order) -> TriSeries:
    """``prod_{i>=1} prod_{m,l} (1 - p^i y^l q^m)^(-c(mi, l))``, integer ``m >= 0``."""
    qo = as_rational(q_order)
    m_max = math.ceil(qo) - 1
    c._require(m_max * P + 1)
    out = TriSeries.one(P, qo)
    for i in range(1, P + 1):
        for (M, l), v in sorted(c.entries.items()):
            if not v or M % i or M / i >= qo:
                continue
            out = out * _power_factor(v, i, l, M / i, P, qo)
    return out


# ---------------------------------------------------------------- left side and check


def dmvv_lhs(x_model: RingModel, n: int, q_order) -> GenusResult:
    """``Ell_orb(X^n, S_n)`` through commuting pairs and Phi-factor integrals."""
    if n > 4:
        raise UnsupportedScale("symmetric products are computed for n <= 4")
    if n == 0:
        return GenusResult(Series.one(q_order), 0, "ell", q_order)
    return ell_orbifold(symmetric_product_data(x_model, n), q_order)


def euler_product(e, P: int) -> list:
    """Coefficients of ``prod_i (1 - t^i)^(-e)`` through ``t^P``."""
    coeffs = [ONE] + [ZERO] * P
    for i in range(1, P + 1):
        f = [ZERO] * (P + 1)
        for k in range(P // i + 1):
            f[k * i] = _gen_binomial(int(e) + k - 1, k)
        coeffs = [sum((coeffs[a] * f[n - a] for a in range(n + 1)), ZERO) for n in range(P + 1)]
    return coeffs


@dataclass
class DmvvReport:
    passed: bool
    p_order: int
    q_order: object
    first_mismatch: dict | None
    euler: dict = field(default_factory=dict)
    lhs: list = field(default_factory=list)
    rhs: TriSeries | None = None

    def to_json(self) -> dict:
        return {
            "kind": "dmvv_report",
            "pass": self.passed,
            "orders_checked": {"p": self.p_order, "q": fmt_rational(self.q_order)},
            "first_mismatch": self.first_mismatch,
            "euler": self.euler,
        }


def dmvv_check(x_model: RingModel, P: int, q_order) -> DmvvReport:
    if P > 4:
        raise UnsupportedScale("the left side is enumerated for n <= 4")
    qo = as_rational(q_order)
    depth = (math.ceil(qo) - 1) * P + 1
    table = CoeffTable.from_result(ell_smooth(x_model, depth))
    rhs = dmvv_rhs(table, P, qo)
    lhs = [dmvv_lhs(x_model, n, qo) for n in range(P + 1)]
    mismatch = None
    for n in range(P + 1):
        mm = lhs[n].series.first_mismatch(rhs.coeff(n), qo)
        if mm is not None:
            y, q, a, b = mm
            mismatch = {"p": n, "q": fmt_rational(q), "y": fmt_rational(y), "lhs": fmt_rational(a), "rhs": fmt_rational(b)}
            break
    # Euler specialization: y = 1, q = 0 on both sides against the closed product
    e = x_model.euler_number()
    closed = euler_product(e, P)
    lhs_e = [sum(lhs[n].series.q_row(0).values(), ZERO) for n in range(P + 1)]
    rhs_e = [sum(rhs.coeff(n).q_row(0).values(), ZERO) for n in range(P + 1)]
    direct = [ONE] + [orbifold_euler(symmetric_product_data(x_model, n)) for n in range(1, P + 1)]
    euler_ok = lhs_e == closed == rhs_e == direct
    euler = {
        "pass": euler_ok,
        "euler_number": fmt_rational(e),
        "product": [fmt_rational(v) for v in closed],
        "lhs": [fmt_rational(v) for v in lhs_e],
        "rhs": [fmt_rational(v) for v in rhs_e],
    }
    return DmvvReport(mismatch is None and euler_ok, P, qo, mismatch, euler, lhs, rhs)
