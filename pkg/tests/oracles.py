"""Independent reference computations used by the tests.

Nothing here touches the package's jet or localization machinery:

* ``rr_genus_projective`` expands the elliptic-genus bundle of ``P^n`` (or
  a product of projective spaces) into line-bundle characters through the
  Euler sequence and applies Riemann-Roch for ``O(k)``.
* ``k3_theta_genus`` is ``8 sum_i (theta_i(z) / theta_i(0))^2`` from the
  theta series.
* ``HODGE`` holds Hodge diamonds of the small test varieties.
"""

from __future__ import annotations

import math
from fractions import Fraction

import sympy as sp

Y = sp.Symbol("y")

HODGE = {
    # h^{p,p} only; all test varieties have h^{p,q} = 0 for p != q
    "P1": [1, 1],
    "P2": [1, 1, 1],
    "P1xP1": [1, 2, 1],
    "F2": [1, 2, 1],
}


def chi_minus_y(hpp: list[int]) -> dict:
    """``y^(-d/2) chi_{-y}`` as ``{y_exp: coeff}`` for a diagonal Hodge diamond."""
    d = len(hpp) - 1
    return {Fraction(p) - Fraction(d, 2): h for p, h in enumerate(hpp) if h}


# ---------------------------------------------------------------- Riemann-Roch oracle


def _mul(a: dict, b: dict, Q: int) -> dict:
    out: dict = {}
    for (ka, qa), ca in a.items():
        for (kb, qb), cb in b.items():
            if qa + qb < Q:
                key = (tuple(x + y for x, y in zip(ka, kb)), qa + qb)
                out[key] = out.get(key, 0) + ca * cb
    return out


def _line_factor(weight: tuple, Q: int) -> dict:
    """Character of ``Lam_{-y} L* prod_n Lam_{-yq^n} L* Lam_{-q^n/y} L S_{q^n} L* S_{q^n} L``.

    ``L`` has multidegree ``weight``; keys are ``(multidegree, q-power)``.
    """
    zero = tuple(0 for _ in weight)
    neg = tuple(-w for w in weight)

    def L(k):
        return tuple(k * w for w in weight)

    def binom(a, b):
        # 1 + b * L^a, accumulated so that a trivial L merges correctly
        out = {(zero, 0): sp.Integer(1)}
        out[a] = out.get(a, 0) + b
        return out

    out = binom((neg, 0), -Y)
    for n in range(1, Q):
        f = _mul(binom((neg, n), -Y), binom((tuple(weight), n), -1 / Y), Q)
        for sgn in (1, -1):
            s = {(L(sgn * k), n * k): sp.Integer(1) for k in range(0, (Q - 1) // n + 1)}
            f = _mul(f, s, Q)
        out = _mul(out, f, Q)
    return out


def _scalar_trivial(Q: int) -> list:
    """The same character for the trivial bundle, as a list over q-powers."""
    f = _line_factor((0,), Q)
    row = [sp.Integer(0)] * Q
    for (_, qp), c in f.items():
        row[qp] += c
    return row


def _inverse_scalar(row: list) -> list:
    inv = [sp.cancel(1 / row[0])]
    for n in range(1, len(row)):
        acc = sum(row[j] * inv[n - j] for j in range(1, n + 1))
        inv.append(sp.cancel(-acc * inv[0]))
    return inv


def rr_genus_projective(dims: tuple[int, ...], Q: int) -> dict:
    """``{(y_exp, q_exp): coeff}`` of the elliptic genus of ``prod P^{n_i}``.

    ``T P^n = O(1)^{n+1} - O`` in K-theory, and
    ``chi(O(k_1, ..., k_r)) = prod binomial(k_i + n_i, n_i)``.
    """
    r = len(dims)
    total = {(tuple(0 for _ in dims), 0): sp.Integer(1)}
    trivial = _inverse_scalar(_scalar_trivial(Q))
    for i, n in enumerate(dims):
        w = tuple(1 if j == i else 0 for j in range(r))
        f = _line_factor(w, Q)
        for _ in range(n + 1):
            total = _mul(total, f, Q)
        # divide by the trivial-bundle character once per factor
        scal = {(tuple(0 for _ in dims), qp): c for qp, c in enumerate(trivial)}
        total = _mul(total, scal, Q)
    rows = [sp.Integer(0)] * Q
    for (ks, qp), c in total.items():
        chi = math.prod(math.comb(k + n, n) if k + n >= 0 else _neg_binom(k, n) for k, n in zip(ks, dims))
        rows[qp] += c * chi
    d = sum(dims)
    out = {}
    for qp, expr in enumerate(rows):
        poly = sp.expand(sp.cancel(expr))
        for term in sp.Add.make_args(poly):
            c, e = term.as_coeff_exponent(Y)
            if c:
                out[(Fraction(str(e)) - Fraction(d, 2), Fraction(qp))] = Fraction(str(c))
    return {k: v for k, v in out.items() if v}


def _neg_binom(k: int, n: int) -> int:
    """``binomial(k + n, n)`` as a polynomial in ``k`` (valid for negative ``k``)."""
    num = 1
    for j in range(1, n + 1):
        num *= k + j
    return num // math.factorial(n)


# ---------------------------------------------------------------- K3 via theta quotients


def _theta_series(kind: int, Q: int) -> dict:
    """``theta_i(z)`` as ``{(2*y_exp, 8*q_exp): coeff}`` (common ``q^(1/8)``-normalization dropped)."""
    out = {}
    N = int(math.isqrt(4 * Q)) + 3
    for n in range(-N, N + 1):
        if kind == 2:
            a = Fraction(2 * n + 1, 2)
            key = (int(2 * a), int(4 * a * a))  # q^(a^2/2) -> 8*a^2/2
            if key[1] < 8 * Q + 8:
                out[key] = out.get(key, 0) + 1
        else:
            key = (2 * n, 4 * n * n)
            if key[1] < 8 * Q + 8:
                sign = (-1) ** n if kind == 4 else 1
                out[key] = out.get(key, 0) + sign
    return out


def _pmul(a: dict, b: dict, cap: int) -> dict:
    out: dict = {}
    for (ya, qa), ca in a.items():
        for (yb, qb), cb in b.items():
            if qa + qb < cap:
                k = (ya + yb, qa + qb)
                out[k] = out.get(k, 0) + ca * cb
    return {k: v for k, v in out.items() if v}


def _q_inverse(a: dict, cap: int) -> dict:
    """Inverse of a y-free series ``{(0, q8): c}`` with leading term at its valuation."""
    v = min(q for _, q in a)
    lead = Fraction(a[(0, v)])
    shifted = {q - v: Fraction(c) for (_, q), c in a.items()}
    inv = {0: 1 / lead}
    for n in range(1, cap + v + 1):
        acc = sum(shifted.get(j, 0) * inv.get(n - j, 0) for j in range(1, n + 1))
        inv[n] = -acc / lead
    return {(0, n - v): c for n, c in inv.items() if c}


def k3_theta_genus(Q: int) -> dict:
    """``{(y_exp, q_exp): coeff}`` of ``8 sum_{i=2,3,4} (theta_i(z)/theta_i(0))^2``."""
    cap = 8 * Q
    total: dict = {}
    for kind in (2, 3, 4):
        th = _theta_series(kind, Q + 1)
        th0 = {}
        for (y2, q8), c in th.items():
            th0[(0, q8)] = th0.get((0, q8), 0) + c
        th0 = {k: v for k, v in th0.items() if v}
        ratio = _pmul(th, _q_inverse(th0, cap + 8), cap)
        sq = _pmul(ratio, ratio, cap)
        for k, v in sq.items():
            total[k] = total.get(k, 0) + 8 * v
    return {
        (Fraction(y2, 2), Fraction(q8, 8)): Fraction(c)
        for (y2, q8), c in total.items()
        if c and q8 < cap
    }


def series_dict(s) -> dict:
    """Package ``Series`` as ``{(y_exp, q_exp): Fraction}``."""
    return {(Fraction(str(y)), Fraction(str(q))): Fraction(str(c)) for y, q, c in s.terms()}


def commuting_pair_count(n: int) -> int:
    """Ordered commuting pairs in ``S_n``: ``|G|`` times the number of classes."""
    return math.factorial(n) * _partition_count(n)


def _partition_count(n: int) -> int:
    ways = [1] + [0] * n
    for part in range(1, n + 1):
        for k in range(part, n + 1):
            ways[k] += ways[k - part]
    return ways[n]
