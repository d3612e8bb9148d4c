"""Truncated bivariate Puiseux series in ``y`` and ``q``.

Exponents are stored as integers in units of ``1/D`` where ``D`` is the
series' denominator bound.  Terms live in ``rows``: a dict from q-exponent
to a dict from y-exponent to coefficient.  Coefficients may be rationals,
:class:`~ellgenus.exactnum.Cyclotomic` numbers, or any commutative algebra
element supporting ``+``, ``*``, unary ``-`` and truth testing (the ring
elements of :mod:`ellgenus.cohom` qualify).

``prec`` is the absolute q-order of the truncation, also in ``1/D`` units:
every term with q-exponent ``>= prec`` is unknown and is dropped.  Exact
polynomials carry ``prec = math.inf``.  Products and inverses propagate the
order honestly, so negative intermediate q-powers are legal.

:class:`YFrac` localizes at the q-free binomials
``B_b = y^(-b/2) - y^(b/2)``.  Theta quotients such as ``1/theta(y^-1)``
are not units in the series ring but become fractions with such
denominators; a final :meth:`YFrac.reduce` divides them out exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import InvalidInput, TruncationError
from .exactnum import (
    ONE,
    ZERO,
    Cyclotomic,
    Q,
    as_rational,
    check_denom,
    cyc_to_rational,
    fmt_rational,
    is_rational,
    root_of_unity,
    scalar_from_json,
    scalar_to_json,
)

INF = math.inf


def _coeff_inv(c):
    if is_rational(c):
        if c == 0:
            raise InvalidInput("leading coefficient is zero")
        return ONE / c
    if isinstance(c, Cyclotomic):
        return c.inv()
    inv = getattr(c, "inverse", None)
    if inv is None:
        raise InvalidInput(f"coefficient {c!r} is not invertible")
    return inv()


def _poly_mul(pa: dict, pb: dict) -> dict:
    out: dict = {}
    for ya, ca in pa.items():
        for yb, cb in pb.items():
            y = ya + yb
            v = out.get(y)
            out[y] = ca * cb if v is None else v + ca * cb
    return out


def _poly_add_into(tgt: dict, src: dict, scale=None) -> None:
    for y, c in src.items():
        if scale is not None:
            c = c * scale
        v = tgt.get(y)
        tgt[y] = c if v is None else v + c


def _clean(rows: dict, prec) -> dict:
    out = {}
    for qe, row in rows.items():
        if qe >= prec:
            continue
        r = {y: c for y, c in row.items() if c}
        if r:
            out[qe] = r
    return out


def _units(x, d: int) -> int:
    v = as_rational(x) * d
    if v.denominator != 1:
        raise InvalidInput(f"exponent {x} not representable with denominator bound {d}")
    return int(v.numerator)


class Series:
    """Immutable truncated series ``sum c * y^(a/D) * q^(b/D)``."""

    __slots__ = ("D", "rows", "prec")

    def __init__(self, rows: dict, D: int = 1, prec=INF, *, clean: bool = True):
        self.D = int(D)
        self.prec = prec
        self.rows = _clean(rows, prec) if clean else rows

    # -- construction -------------------------------------------------------
    @classmethod
    def zero(cls, q_order=None, D: int = 1) -> "Series":
        D, prec = _prec_units(q_order, D)
        return cls({}, D, prec, clean=False)

    @classmethod
    def one(cls, q_order=None, D: int = 1) -> "Series":
        return cls.monomial(ONE, 0, 0, q_order=q_order, D=D)

    @classmethod
    def monomial(cls, coeff=ONE, y=0, q=0, q_order=None, D: int = 1) -> "Series":
        y = as_rational(y)
        qq = as_rational(q)
        D = math.lcm(D, y.denominator, qq.denominator)
        D, prec = _prec_units(q_order, D)
        if isinstance(coeff, int):
            coeff = Q(coeff)
        return cls({_units(qq, D): {_units(y, D): coeff}}, D, prec)

    @classmethod
    def from_terms(cls, terms, q_order=None, D: int = 1) -> "Series":
        """Build from ``{(y_exp, q_exp): coeff}`` or an iterable of triples."""
        items = terms.items() if isinstance(terms, dict) else (((y, q), c) for y, q, c in terms)
        items = [((as_rational(y), as_rational(q)), c) for (y, q), c in items]
        for (y, q), _ in items:
            D = math.lcm(D, y.denominator, q.denominator)
        D, prec = _prec_units(q_order, D)
        rows: dict = {}
        for (y, q), c in items:
            if isinstance(c, int):
                c = Q(c)
            row = rows.setdefault(_units(q, D), {})
            yy = _units(y, D)
            row[yy] = row[yy] + c if yy in row else c
        return cls(rows, D, prec)

    # -- basic queries --------------------------------------------------------
    @property
    def q_order(self):
        """Truncation order as a rational, or ``None`` for exact series."""
        return None if self.prec == INF else Q(self.prec, self.D)

    def is_exact(self) -> bool:
        return self.prec == INF

    def valuation(self):
        """Lowest q-exponent present (rational), or the order for zero series."""
        if self.rows:
            return Q(min(self.rows), self.D)
        return self.q_order

    def _val_units(self):
        return min(self.rows) if self.rows else self.prec

    def __bool__(self) -> bool:
        return bool(self.rows)

    def terms(self):
        """Yield ``(y_exp, q_exp, coeff)`` in canonical (q, y) order."""
        D = self.D
        for qe in sorted(self.rows):
            row = self.rows[qe]
            for ye in sorted(row):
                yield Q(ye, D), Q(qe, D), row[ye]

    def num_terms(self) -> int:
        return sum(len(r) for r in self.rows.values())

    def coeff(self, y, q):
        y = as_rational(y) * self.D
        q = as_rational(q) * self.D
        if y.denominator != 1 or q.denominator != 1:
            return ZERO
        return self.rows.get(int(q.numerator), {}).get(int(y.numerator), ZERO)

    def q_row(self, q) -> dict:
        """``{y_exp: coeff}`` of the given q-exponent."""
        q = as_rational(q) * self.D
        if q.denominator != 1:
            return {}
        row = self.rows.get(int(q.numerator), {})
        return {Q(y, self.D): c for y, c in sorted(row.items())}

    def y_range(self):
        ys = [y for row in self.rows.values() for y in row]
        if not ys:
            return None
        return Q(min(ys), self.D), Q(max(ys), self.D)

    # -- denominators and truncation --------------------------------------------
    def rescale(self, D: int) -> "Series":
        if D == self.D:
            return self
        if D % self.D:
            raise InvalidInput(f"cannot rescale denominator {self.D} to {D}")
        check_denom(D)
        k = D // self.D
        rows = {qe * k: {y * k: c for y, c in row.items()} for qe, row in self.rows.items()}
        return Series(rows, D, self.prec * k, clean=False)

    def truncate(self, q_order) -> "Series":
        """Drop every term with q-exponent ``>= q_order`` (rational)."""
        if q_order is None:
            return self
        qo = as_rational(q_order)
        s = self.rescale(math.lcm(self.D, qo.denominator)) if (qo * self.D).denominator != 1 else self
        p = int(qo * s.D)
        if p >= s.prec:
            return s
        return Series(s.rows, s.D, p)

    def with_prec_units(self, prec) -> "Series":
        if prec >= self.prec:
            return self
        return Series(self.rows, self.D, prec)

    # -- arithmetic -----------------------------------------------------------
    def _aligned(self, other: "Series"):
        if self.D == other.D:
            return self, other
        D = check_denom(math.lcm(self.D, other.D))
        return self.rescale(D), other.rescale(D)

    def __add__(self, other):
        if not isinstance(other, Series):
            if _is_scalar(other):
                other = Series({0: {0: other}}, self.D)
            else:
                return NotImplemented
        a, b = self._aligned(other)
        prec = min(a.prec, b.prec)
        rows = {qe: dict(row) for qe, row in a.rows.items() if qe < prec}
        for qe, row in b.rows.items():
            if qe >= prec:
                continue
            tgt = rows.get(qe)
            if tgt is None:
                rows[qe] = dict(row)
            else:
                _poly_add_into(tgt, row)
        return Series(rows, a.D, prec)

    __radd__ = __add__

    def __neg__(self):
        return Series({qe: {y: -c for y, c in row.items()} for qe, row in self.rows.items()},
                      self.D, self.prec, clean=False)

    def __sub__(self, other):
        if isinstance(other, Series) or _is_scalar(other):
            return self + (-other)
        return NotImplemented

    def __rsub__(self, other):
        if _is_scalar(other):
            return (-self) + other
        return NotImplemented

    def scale(self, c) -> "Series":
        if isinstance(c, int):
            c = Q(c)
        if not c:
            return Series({}, self.D, self.prec, clean=False)
        return Series({qe: {y: v * c for y, v in row.items()} for qe, row in self.rows.items()},
                      self.D, self.prec)

    def __mul__(self, other):
        if not isinstance(other, Series):
            if _is_scalar(other):
                return self.scale(other)
            return NotImplemented
        a, b = self._aligned(other)
        va, vb = a._val_units(), b._val_units()
        prec = min(a.prec + vb, b.prec + va)
        if prec != prec:  # inf - inf cannot occur, guard nan anyway
            prec = INF
        out: dict = {}
        brows = sorted(b.rows.items())
        for qa, rowa in a.rows.items():
            lim = prec - qa
            for qb, rowb in brows:
                if qb >= lim:
                    break
                qe = qa + qb
                tgt = out.get(qe)
                if tgt is None:
                    tgt = out[qe] = {}
                for ya, ca in rowa.items():
                    for yb, cb in rowb.items():
                        y = ya + yb
                        v = tgt.get(y)
                        tgt[y] = ca * cb if v is None else v + ca * cb
        return Series(out, a.D, prec)

    def __rmul__(self, other):
        if _is_scalar(other):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, e: int) -> "Series":
        if not isinstance(e, int):
            return NotImplemented
        if e < 0:
            return self.inverse() ** (-e)
        result = Series({0: {0: ONE}}, self.D)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def mul_monomial(self, coeff, y=0, q=0) -> "Series":
        """Multiply by the exact monomial ``coeff * y^y * q^q``."""
        y, q = as_rational(y), as_rational(q)
        D = math.lcm(self.D, y.denominator, q.denominator)
        s = self.rescale(check_denom(D))
        dy, dq = _units(y, D), _units(q, D)
        rows = {qe + dq: {ye + dy: c * coeff for ye, c in row.items()} for qe, row in s.rows.items()}
        return Series(rows, D, s.prec + dq)

    def inverse(self, q_order=None) -> "Series":
        """Multiplicative inverse.

        The lowest q-row must be a single monomial with an invertible
        coefficient.  Exact non-monomial inputs need ``q_order``.
        """
        if not self.rows:
            raise InvalidInput("cannot invert zero series")
        v = min(self.rows)
        lead = self.rows[v]
        if len(lead) != 1:
            raise InvalidInput("leading q-row is not a single monomial; series is not a unit")
        (ly, lc), = lead.items()
        cinv = _coeff_inv(lc)
        target = self.prec - 2 * v
        if q_order is not None:
            D, p = _prec_units(q_order, self.D)
            s = self.rescale(check_denom(D))
            k = D // self.D
            v, ly, target = v * k, ly * k, min(s.prec - 2 * v * k, p)
        else:
            s = self
            D = self.D
        if target == INF:
            if len(s.rows) == 1:
                return Series({-v: {-ly: cinv}}, D, INF)
            raise InvalidInput("inverse of an exact non-monomial series needs a q_order")
        # n = a / lead - 1, relative q-exponents > 0
        rel = target + v  # relative precision needed for 1/(1+n)
        n_rows = {}
        for qe, row in s.rows.items():
            if qe == v:
                continue
            r = qe - v
            if r >= rel:
                continue
            n_rows[r] = {y - ly: c * cinv for y, c in row.items()}
        n_items = sorted(n_rows.items())
        b: dict = {0: {0: ONE}}
        for e in range(1, int(rel) if rel != INF else 0):
            acc: dict = {}
            for k, nk in n_items:
                if k > e:
                    break
                prev = b.get(e - k)
                if prev:
                    _poly_add_into(acc, _poly_mul(nk, prev))
            acc = {y: -c for y, c in acc.items() if c}
            if acc:
                b[e] = acc
        rows = {e - v: {y - ly: c * cinv for y, c in row.items()} for e, row in b.items()}
        return Series(rows, D, target)

    def __truediv__(self, other):
        if isinstance(other, Series):
            return self * other.inverse()
        if _is_scalar(other):
            return self.scale(_coeff_inv(other))
        return NotImplemented

    # -- coefficient maps ------------------------------------------------------
    def map_coeffs(self, fn) -> "Series":
        return Series({qe: {y: fn(c) for y, c in row.items()} for qe, row in self.rows.items()},
                      self.D, self.prec)

    def to_rational(self) -> "Series":
        """Replace every coefficient by its rational value or raise."""
        return self.map_coeffs(cyc_to_rational)

    def is_rational(self) -> bool:
        try:
            self.to_rational()
        except Exception:
            return False
        return True

    # -- substitution ------------------------------------------------------------
    def substitute(self, rule) -> "Series":
        return series_substitute(self, rule)

    def eval_y1(self) -> "Series":
        """Specialize ``y = 1`` (collapses every row to its coefficient sum)."""
        rows = {}
        for qe, row in self.rows.items():
            tot = ZERO
            for c in row.values():
                tot = tot + c
            rows[qe] = {0: tot}
        return Series(rows, self.D, self.prec)

    # -- comparison ------------------------------------------------------------------
    def first_mismatch(self, other: "Series", q_order=None):
        """First ``(y, q, self_coeff, other_coeff)`` differing below the common order."""
        a, b = self._aligned(other)
        prec = min(a.prec, b.prec)
        if q_order is not None:
            prec = min(prec, math.ceil(as_rational(q_order) * a.D))
        for qe in sorted(set(a.rows) | set(b.rows)):
            if qe >= prec:
                break
            ra, rb = a.rows.get(qe, {}), b.rows.get(qe, {})
            for ye in sorted(set(ra) | set(rb)):
                ca, cb = ra.get(ye, ZERO), rb.get(ye, ZERO)
                if ca != cb:
                    return Q(ye, a.D), Q(qe, a.D), ca, cb
        return None

    def __eq__(self, other):
        if _is_scalar(other):
            other = Series({0: {0: other}}, self.D)
        if not isinstance(other, Series):
            return NotImplemented
        return self.first_mismatch(other) is None

    __hash__ = None

    def __repr__(self):
        parts = []
        for y, q, c in self.terms():
            parts.append(f"({_fmt_coeff(c)})*y^{fmt_rational(y)}*q^{fmt_rational(q)}")
        body = " + ".join(parts) if parts else "0"
        tail = "" if self.prec == INF else f" + O(q^{fmt_rational(self.q_order)})"
        return f"Series({body}{tail})"

    # -- serialization ------------------------------------------------------------------
    def to_json(self) -> dict:
        return {
            "D": self.D,
            "Q": None if self.prec == INF else fmt_rational(self.q_order),
            "terms": [
                {"y": fmt_rational(y), "q": fmt_rational(q), "coeff": scalar_to_json(c)}
                for y, q, c in self.terms()
            ],
        }

    @classmethod
    def from_json(cls, data: dict) -> "Series":
        try:
            D = int(data["D"])
            qo = data["Q"]
            terms = {
                (as_rational(t["y"]), as_rational(t["q"])): scalar_from_json(t["coeff"])
                for t in data["terms"]
            }
        except (KeyError, TypeError) as exc:
            raise InvalidInput(f"malformed series JSON: {exc}") from exc
        return cls.from_terms(terms, q_order=None if qo is None else as_rational(qo), D=D)


def _is_scalar(x) -> bool:
    return is_rational(x) or isinstance(x, Cyclotomic) or hasattr(x, "is_ring_element")


def _fmt_coeff(c) -> str:
    if is_rational(c):
        return fmt_rational(c)
    return repr(c)


def _prec_units(q_order, D: int):
    """Return ``(D', prec)`` with ``D'`` a multiple of ``D`` making ``q_order`` integral."""
    if q_order is None or q_order == INF:
        return D, INF
    qo = as_rational(q_order)
    D = check_denom(math.lcm(D, qo.denominator))
    return D, int(qo * D)


# ---------------------------------------------------------------- functional forms


def series_arith(a: Series, b: Series | None, op: str) -> Series:
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    if op == "neg":
        return -a
    raise InvalidInput(f"unknown series op {op!r}")


def series_invert(a: Series, q_order=None) -> Series:
    return a.inverse(q_order)


@dataclass(frozen=True)
class ShiftY:
    """``y -> exp(2 pi i * phase) * y * q^r``."""

    r: object = 0
    phase: object = 0


@dataclass(frozen=True)
class PhaseQ:
    """``q^b -> exp(2 pi i * t * b) * q^b``; ``t = 1`` is ``tau -> tau + 1``."""

    t: object = 1


@dataclass(frozen=True)
class PowY:
    """``y -> y^c``."""

    c: object = 1


def series_substitute(a: Series, rule) -> Series:
    """Apply a monomial substitution termwise.

    The truncation order of the input is kept.  For ``ShiftY`` with
    ``r != 0`` the image of the unknown tail is not controlled by it, so
    callers compare only on orders whose preimages were known (see
    :func:`ellgenus.genuscore.jacobi_shift_check`).
    """
    if isinstance(rule, PowY):
        c = as_rational(rule.c)
        if c == 1:
            return a
        D = check_denom(a.D * c.denominator)
        s = a.rescale(D)
        rows = {}
        for qe, row in s.rows.items():
            new: dict = {}
            for ye, v in row.items():
                ny = ye * c
                if ny.denominator != 1:
                    raise InvalidInput("y-power substitution leaves exponent lattice")
                _poly_add_into(new, {int(ny): v})
            rows[qe] = new
        return Series(rows, D, s.prec)
    if isinstance(rule, ShiftY):
        r, phase = as_rational(rule.r), as_rational(rule.phase)
        if r == 0 and phase == 0:
            return a
        D = check_denom(math.lcm(a.D, r.denominator))
        s = a.rescale(D)
        rows: dict = {}
        for qe, row in s.rows.items():
            for ye, v in row.items():
                ya = Q(ye, D)
                shift = ya * r * D
                if shift.denominator != 1:
                    D2 = check_denom(math.lcm(D, shift.denominator * D))
                    return series_substitute(a.rescale(D2), rule)
                if phase:
                    v = v * root_of_unity(phase * ya)
                nq = qe + int(shift)
                tgt = rows.setdefault(nq, {})
                tgt[ye] = tgt[ye] + v if ye in tgt else v
        return Series(rows, D, s.prec)
    if isinstance(rule, PhaseQ):
        t = as_rational(rule.t)
        rows = {}
        for qe, row in a.rows.items():
            z = root_of_unity(t * Q(qe, a.D))
            rows[qe] = {ye: v * z for ye, v in row.items()}
        return Series(rows, a.D, a.prec)
    raise InvalidInput(f"unknown substitution rule {rule!r}")


def exp_nilpotent(a: Series, max_steps: int | None = None) -> Series:
    """``sum_j a^j / j!`` for a series whose coefficients are nilpotent."""
    if max_steps is None:
        max_steps = 64
        for row in a.rows.values():
            for c in row.values():
                model = getattr(c, "model", None)
                if model is not None:
                    max_steps = model.dim + 1
                break
            break
    result = Series.one(D=a.D).with_prec_units(a.prec) if a.prec != INF else Series.one(D=a.D)
    term = result
    for j in range(1, max_steps + 1):
        term = (term * a).scale(Q(1, j))
        if not term:
            return result
        result = result + term
    raise InvalidInput("exp_nilpotent: argument is not nilpotent")


# ---------------------------------------------------------------- localization


def binomial_series(beta, D: int = 1) -> Series:
    """The q-free binomial ``B_beta = y^(-beta/2) - y^(beta/2)``."""
    beta = as_rational(beta)
    return Series.from_terms({(-beta / 2, 0): ONE, (beta / 2, 0): -ONE}, D=D)


def _divide_binomial(s: Series, beta):
    """Exact ``s / B_beta`` row by row, or ``None`` if some row is not divisible."""
    beta = as_rational(beta)
    D = check_denom(math.lcm(s.D, (beta / 2).denominator))
    s = s.rescale(D)
    step = int(beta * D)
    half = int(beta * D / 2)
    rows = {}
    for qe, row in s.rows.items():
        # row = y^(-beta/2) (1 - y^beta) * out  =>  row * y^(beta/2) = (1 - t^step) out
        p = {ye + half: c for ye, c in row.items()}
        lo, hi = min(p), max(p)
        out = {}
        for ye in range(lo, hi - step + 1):
            c = p.get(ye, ZERO) + out.get(ye - step, ZERO)
            if c:
                out[ye] = c
        # remainder check: p - (1 - t^step) out must vanish
        for ye in range(hi - step + 1, hi + 1):
            c = p.get(ye, ZERO) + out.get(ye - step, ZERO)
            if c:
                return None
        rows[qe] = out
    return Series(rows, D, s.prec)


class YFrac:
    """``num / prod_b B_b^{n_b}`` with ``B_b = y^(-b/2) - y^(b/2)``, ``b > 0``."""

    __slots__ = ("num", "den")

    def __init__(self, num: Series, den: dict | None = None):
        self.num = num
        self.den = {as_rational(k): int(v) for k, v in (den or {}).items() if v}

    @classmethod
    def lift(cls, x) -> "YFrac":
        if isinstance(x, YFrac):
            return x
        if isinstance(x, Series):
            return cls(x)
        return cls(Series({0: {0: x}}))

    @classmethod
    def inv_binomial(cls, beta, power: int = 1) -> "YFrac":
        """``B_beta^(-power)``; negative ``beta`` flips the sign."""
        beta = as_rational(beta)
        if beta == 0:
            raise InvalidInput("B_0 = 0 is not invertible")
        sign = ONE if beta > 0 or power % 2 == 0 else -ONE
        return cls(Series({0: {0: sign}}), {abs(beta): power})

    def _expand_to(self, den: dict) -> Series:
        num = self.num
        for b, n in den.items():
            extra = n - self.den.get(b, 0)
            if extra:
                num = num * binomial_series(b) ** extra
        return num

    def __add__(self, other):
        other = YFrac.lift(other)
        den = dict(self.den)
        for b, n in other.den.items():
            den[b] = max(den.get(b, 0), n)
        return YFrac(self._expand_to(den) + other._expand_to(den), den)

    __radd__ = __add__

    def __neg__(self):
        return YFrac(-self.num, self.den)

    def __sub__(self, other):
        return self + (-YFrac.lift(other))

    def __rsub__(self, other):
        return YFrac.lift(other) - self

    def __mul__(self, other):
        if isinstance(other, YFrac):
            den = dict(self.den)
            for b, n in other.den.items():
                den[b] = den.get(b, 0) + n
            return YFrac(self.num * other.num, den)
        if isinstance(other, Series):
            return YFrac(self.num * other, self.den)
        if _is_scalar(other):
            return YFrac(self.num.scale(other), self.den)
        return NotImplemented

    __rmul__ = __mul__

    def scale(self, c) -> "YFrac":
        return YFrac(self.num.scale(c), self.den)

    def __bool__(self):
        return bool(self.num)

    def inverse(self) -> "YFrac":
        inv = self.num.inverse()
        num = inv
        for b, n in self.den.items():
            num = num * binomial_series(b) ** n
        return YFrac(num)

    def reduce(self) -> "YFrac":
        """Divide out every binomial factor that divides the numerator exactly."""
        num = self.num
        den = dict(self.den)
        for b in sorted(den):
            while den[b] > 0:
                q = _divide_binomial(num, b)
                if q is None:
                    break
                num = q
                den[b] -= 1
        return YFrac(num, {b: n for b, n in den.items() if n})

    def to_series(self) -> Series:
        r = self.reduce()
        if r.den:
            raise TruncationError(
                "quotient is not a Laurent polynomial in y at the computed orders: "
                f"remaining denominators {sorted(r.den.items())}"
            )
        return r.num

    def truncate(self, q_order) -> "YFrac":
        return YFrac(self.num.truncate(q_order), self.den)

    def __eq__(self, other):
        other = YFrac.lift(other)
        den = dict(self.den)
        for b, n in other.den.items():
            den[b] = max(den.get(b, 0), n)
        return self._expand_to(den) == other._expand_to(den)

    __hash__ = None

    def __repr__(self):
        den = " ".join(f"B[{fmt_rational(b)}]^{n}" for b, n in sorted(self.den.items()))
        return f"YFrac({self.num!r} / {den or 1})"


def as_fraction_exponent(x) -> Fraction:
    """Stdlib ``Fraction`` view of an exponent, handy for JSON keys."""
    x = as_rational(x)
    return Fraction(int(x.numerator), int(x.denominator))
