"""Exact scalars: rationals and elements of cyclotomic fields.

Rationals come from one of two interchangeable backends, picked once at
import time from the ``ELLGENUS_BACKEND`` environment variable:

``gmpy2``  (default when importable) ``gmpy2.mpq``, roughly 10x faster.
``python`` ``fractions.Fraction``, the pure-stdlib fallback.

Both are reduced, hash-compatible and interoperate, so results do not
depend on the backend; ``benchmarks/bench_backends.py`` compares them.

A cyclotomic number of order ``N`` is stored in the power basis
``1, z, ..., z^(phi(N)-1)`` modulo the ``N``-th cyclotomic polynomial,
which makes the representation canonical and the rationality test a
check on the non-constant coordinates.
"""

from __future__ import annotations

import contextlib
import contextvars
import functools
import math
import os
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from numbers import Rational as _RationalABC

from .errors import CapacityError, InvalidInput, RationalityFailure

_requested = os.environ.get("ELLGENUS_BACKEND", "gmpy2").strip().lower()
if _requested not in ("gmpy2", "python"):
    raise ImportError(f"ELLGENUS_BACKEND must be 'gmpy2' or 'python', got {_requested!r}")

BACKEND = "python"
if _requested == "gmpy2":
    try:
        from gmpy2 import mpq as _mpq

        BACKEND = "gmpy2"
    except ImportError:  # pragma: no cover - depends on environment
        _mpq = None

if BACKEND == "gmpy2":
    Q = _mpq
else:
    Q = Fraction

ZERO = Q(0)
ONE = Q(1)

# ---------------------------------------------------------------- caps


@dataclass(frozen=True)
class Caps:
    denom: int = 120
    cyclotomic: int = 24


def _env_int(name: str, default: int) -> int:
    raw = os.environ.get(name)
    return int(raw) if raw else default


_caps: contextvars.ContextVar[Caps] = contextvars.ContextVar(
    "ellgenus_caps",
    default=Caps(
        denom=_env_int("ELLGENUS_DENOM_CAP", 120),
        cyclotomic=_env_int("ELLGENUS_CYC_CAP", 24),
    ),
)


def current_caps() -> Caps:
    return _caps.get()


@contextlib.contextmanager
def caps(denom: int | None = None, cyclotomic: int | None = None):
    """Temporarily override the capacity caps (context-local)."""
    old = _caps.get()
    new = Caps(
        denom=old.denom if denom is None else int(denom),
        cyclotomic=old.cyclotomic if cyclotomic is None else int(cyclotomic),
    )
    token = _caps.set(new)
    try:
        yield new
    finally:
        _caps.reset(token)


def cap_cached(maxsize: int | None = None):
    """``lru_cache`` keyed additionally on the active caps."""

    def deco(fn):
        @lru_cache(maxsize=maxsize)
        def cached(_caps_key, *args):
            return fn(*args)

        @functools.wraps(fn)
        def wrapper(*args):
            return cached(_caps.get(), *args)

        wrapper.cache_clear = cached.cache_clear
        return wrapper

    return deco


def check_denom(d: int) -> int:
    cap = _caps.get().denom
    if d > cap:
        raise CapacityError(f"exponent denominator {d} exceeds denom cap {cap}")
    return d


# ---------------------------------------------------------------- rationals


def is_rational(x) -> bool:
    return isinstance(x, (int, _RationalABC)) and not isinstance(x, bool)


def as_rational(x):
    """Coerce ints, Fractions, mpq and "p/q" strings to the backend type."""
    if isinstance(x, str):
        try:
            return Q(Fraction(x.strip()))
        except (ValueError, ZeroDivisionError) as exc:
            raise InvalidInput(f"bad rational literal {x!r}") from exc
    if isinstance(x, bool):
        raise InvalidInput("booleans are not rationals")
    if isinstance(x, int):
        return Q(x)
    if isinstance(x, _RationalABC):
        return Q(x.numerator, x.denominator)
    raise InvalidInput(f"cannot interpret {x!r} as a rational")


def fmt_rational(x) -> str:
    x = as_rational(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def frac_part(x):
    """Lift to [0, 1)."""
    x = as_rational(x)
    return x - (x.numerator // x.denominator)


# ---------------------------------------------------------------- cyclotomic fields


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """Integer coefficients of the n-th cyclotomic polynomial, low degree first."""
    if n < 1:
        raise InvalidInput("cyclotomic order must be positive")
    num = [-1] + [0] * (n - 1) + [1]  # x^n - 1
    for d in range(1, n):
        if n % d == 0:
            num = _poly_exact_div(num, list(cyclotomic_polynomial(d)))
    return tuple(num)


def _poly_exact_div(num: list[int], den: list[int]) -> list[int]:
    num = list(num)
    out = [0] * (len(num) - len(den) + 1)
    lead = den[-1]
    for i in range(len(out) - 1, -1, -1):
        c = num[i + len(den) - 1] // lead
        out[i] = c
        for j, dj in enumerate(den):
            num[i + j] -= c * dj
    assert not any(num), "inexact cyclotomic division"
    return out


@dataclass(frozen=True)
class _FieldData:
    order: int
    degree: int
    powers: tuple[tuple[int, ...], ...]  # z^e mod Phi_N for e in range(N)


@lru_cache(maxsize=None)
def _field(n: int) -> _FieldData:
    phi = cyclotomic_polynomial(n)
    deg = len(phi) - 1
    powers = []
    cur = [0] * deg
    cur[0] = 1
    for _ in range(n):
        powers.append(tuple(cur))
        # multiply by z and reduce z^deg = -sum phi_k z^k
        top = cur[-1]
        cur = [0] + cur[:-1]
        if top:
            for k in range(deg):
                cur[k] -= top * phi[k]
    return _FieldData(n, deg, tuple(powers))


def _check_order(n: int) -> None:
    cap = _caps.get().cyclotomic
    if n > cap:
        raise CapacityError(f"cyclotomic order {n} exceeds cap {cap}")


class Cyclotomic:
    """Immutable element of Q(zeta_N) in the reduced power basis."""

    __slots__ = ("order", "coeffs", "_hash")

    def __init__(self, order: int, coeffs):
        if order < 1:
            raise InvalidInput("cyclotomic order must be positive")
        _check_order(order)
        fd = _field(order)
        coeffs = tuple(as_rational(c) for c in coeffs)
        if len(coeffs) != fd.degree:
            raise InvalidInput(
                f"order {order} needs {fd.degree} coefficients, got {len(coeffs)}"
            )
        self.order = order
        self.coeffs = coeffs
        self._hash = None

    @classmethod
    def _raw(cls, order: int, coeffs: tuple) -> "Cyclotomic":
        obj = object.__new__(cls)
        obj.order = order
        obj.coeffs = coeffs
        obj._hash = None
        return obj

    @classmethod
    def from_rational(cls, x, order: int = 1) -> "Cyclotomic":
        _check_order(order)
        deg = _field(order).degree
        return cls._raw(order, (as_rational(x),) + (ZERO,) * (deg - 1))

    # -- field embedding -------------------------------------------------
    def embed(self, order: int) -> "Cyclotomic":
        if order == self.order:
            return self
        if order % self.order:
            raise InvalidInput(f"cannot embed order {self.order} into order {order}")
        _check_order(order)
        fd = _field(order)
        step = order // self.order
        out = [ZERO] * fd.degree
        for k, c in enumerate(self.coeffs):
            if c:
                for j, p in enumerate(fd.powers[(k * step) % order]):
                    if p:
                        out[j] += c * p
        return Cyclotomic._raw(order, tuple(out))

    def _align(self, other: "Cyclotomic"):
        if self.order == other.order:
            return self, other
        n = math.lcm(self.order, other.order)
        return self.embed(n), other.embed(n)

    # -- arithmetic -------------------------------------------------------
    def __add__(self, other):
        if isinstance(other, Cyclotomic):
            a, b = self._align(other)
            return Cyclotomic._raw(a.order, tuple(x + y for x, y in zip(a.coeffs, b.coeffs)))
        if is_rational(other):
            c = list(self.coeffs)
            c[0] = c[0] + other
            return Cyclotomic._raw(self.order, tuple(c))
        return NotImplemented

    __radd__ = __add__

    def __neg__(self):
        return Cyclotomic._raw(self.order, tuple(-x for x in self.coeffs))

    def __sub__(self, other):
        if isinstance(other, Cyclotomic) or is_rational(other):
            return self + (-other)
        return NotImplemented

    def __rsub__(self, other):
        if is_rational(other):
            return (-self) + other
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, Cyclotomic):
            a, b = self._align(other)
            fd = _field(a.order)
            deg = fd.degree
            if deg == 1:
                return Cyclotomic._raw(a.order, (a.coeffs[0] * b.coeffs[0],))
            prod = [ZERO] * (2 * deg - 1)
            for i, x in enumerate(a.coeffs):
                if x:
                    for j, y in enumerate(b.coeffs):
                        if y:
                            prod[i + j] += x * y
            out = prod[:deg]
            powers = fd.powers
            n = a.order
            for e in range(deg, 2 * deg - 1):
                c = prod[e]
                if c:
                    for j, p in enumerate(powers[e % n]):
                        if p:
                            out[j] += c * p
            return Cyclotomic._raw(a.order, tuple(out))
        if is_rational(other):
            return Cyclotomic._raw(self.order, tuple(x * other for x in self.coeffs))
        return NotImplemented

    __rmul__ = __mul__

    def inv(self) -> "Cyclotomic":
        if not self:
            raise InvalidInput("division by zero in cyclotomic field")
        fd = _field(self.order)
        deg = fd.degree
        # column k of the multiplication-by-self matrix is self * z^k
        cols = [
            (self * Cyclotomic._raw(self.order, tuple(Q(v) for v in fd.powers[k]))).coeffs
            for k in range(deg)
        ]
        mat = [[cols[k][r] for k in range(deg)] + [ONE if r == 0 else ZERO] for r in range(deg)]
        sol = _solve(mat, deg)
        return Cyclotomic._raw(self.order, tuple(sol))

    def __truediv__(self, other):
        if isinstance(other, Cyclotomic):
            return self * other.inv()
        if is_rational(other):
            if other == 0:
                raise InvalidInput("division by zero")
            return self * (ONE / as_rational(other))
        return NotImplemented

    def __rtruediv__(self, other):
        if is_rational(other):
            return self.inv() * other
        return NotImplemented

    def __pow__(self, e: int):
        if not isinstance(e, int):
            return NotImplemented
        if e < 0:
            return self.inv() ** (-e)
        result = Cyclotomic.from_rational(1, self.order)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    # -- comparisons ------------------------------------------------------
    def __bool__(self):
        return any(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, Cyclotomic):
            a, b = self._align(other)
            return a.coeffs == b.coeffs
        if is_rational(other):
            return self.coeffs[0] == other and not any(self.coeffs[1:])
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            if not any(self.coeffs[1:]):
                self._hash = hash(self.coeffs[0])
            else:
                self._hash = hash(("cyc", self.order, self.coeffs))
        return self._hash

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def __repr__(self):
        terms = []
        for k, c in enumerate(self.coeffs):
            if c:
                terms.append(fmt_rational(c) + ("" if k == 0 else f"*z{self.order}^{k}"))
        return "Cyclotomic(" + (" + ".join(terms) or "0") + ")"

    def to_json(self) -> dict:
        return {"order": self.order, "coeffs": [fmt_rational(c) for c in self.coeffs]}

    @classmethod
    def from_json(cls, data: dict) -> "Cyclotomic":
        try:
            return cls(int(data["order"]), [as_rational(c) for c in data["coeffs"]])
        except (KeyError, TypeError) as exc:
            raise InvalidInput(f"malformed cyclotomic {data!r}") from exc


def _solve(mat: list[list], n: int) -> list:
    """Gauss-Jordan on an n x (n+1) augmented matrix over Q."""
    mat = [row[:] for row in mat]
    for col in range(n):
        piv = next((r for r in range(col, n) if mat[r][col]), None)
        if piv is None:
            raise InvalidInput("singular system")
        mat[col], mat[piv] = mat[piv], mat[col]
        inv = ONE / mat[col][col]
        mat[col] = [v * inv for v in mat[col]]
        for r in range(n):
            if r != col and mat[r][col]:
                f = mat[r][col]
                mat[r] = [a - f * b for a, b in zip(mat[r], mat[col])]
    return [mat[r][n] for r in range(n)]


def cyc_root_of_unity(k: int, n: int) -> Cyclotomic:
    """zeta_n ** k in the field of order n."""
    if n < 1:
        raise InvalidInput("root of unity order must be positive")
    _check_order(n)
    fd = _field(n)
    return Cyclotomic._raw(n, tuple(Q(v) for v in fd.powers[k % n]))


def root_of_unity(phase) -> Cyclotomic | object:
    """exp(2 pi i * phase) for a rational phase, as a rational when it is +-1."""
    phase = frac_part(phase)
    if phase == 0:
        return ONE
    if phase == Q(1, 2):
        return -ONE
    return cyc_root_of_unity(phase.numerator, phase.denominator)


def cyc_arith(a, b, op: str):
    """Dispatch form of the field operations (``add``, ``mul``, ``neg``, ``inv``)."""
    a = a if isinstance(a, Cyclotomic) else Cyclotomic.from_rational(a)
    if op == "neg":
        return -a
    if op == "inv":
        return a.inv()
    b = b if isinstance(b, Cyclotomic) else Cyclotomic.from_rational(b)
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    raise InvalidInput(f"unknown cyclotomic op {op!r}")


def cyc_to_rational(a):
    """Return the rational value of ``a`` or raise :class:`RationalityFailure`."""
    if isinstance(a, Cyclotomic):
        if a.is_rational():
            return a.coeffs[0]
        raise RationalityFailure(a)
    if is_rational(a):
        return as_rational(a)
    raise RationalityFailure(a, f"unsupported scalar {a!r}")


def scalar_to_json(c):
    if isinstance(c, Cyclotomic):
        return c.to_json()
    return fmt_rational(c)


def scalar_from_json(data):
    if isinstance(data, dict):
        return Cyclotomic.from_json(data)
    return as_rational(data)
